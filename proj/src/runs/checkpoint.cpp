#include <array>
#include <cstring>
#include <fstream>
#include <sstream>

#include "radwave/runs.hpp"

// Layout, host byte order, all integers 64-bit unless noted:
//   magic "RADWCKPT", u32 version, u32 sizeof(double)
//   tag: p, s, J, horizon, dt
//   L, N, t, step, u0_norm
//   u, ut, w, wt (N doubles each)
//   energy_v0, energy_window_max, hs_u0, sup_hs_u, hsc_w0, sup_hsc_w
//   accumulator count, then {sum, last, last_t, count} each
//   sample count, then seven doubles each
//   SHA-256 of everything above (32 bytes)

namespace radwave::runs {

namespace {

constexpr char kMagic[8] = {'R', 'A', 'D', 'W', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  template <typename T>
  void put(const T& x) {
    static_assert(std::is_trivially_copyable_v<T>);
    buf_.append(reinterpret_cast<const char*>(&x), sizeof(T));
  }
  void put_vector(const Vector<double>& v) {
    buf_.append(reinterpret_cast<const char*>(v.data()),
                sizeof(double) * static_cast<std::size_t>(v.size()));
  }
  std::string& bytes() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(const std::string& b) : buf_(b) {}
  template <typename T>
  T get() {
    T x;
    take(&x, sizeof(T));
    return x;
  }
  Vector<double> get_vector(Index n) {
    Vector<double> v(n);
    take(v.data(), sizeof(double) * static_cast<std::size_t>(n));
    return v;
  }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  void take(void* out, std::size_t n) {
    if (n > remaining()) throw InputError("checkpoint is truncated");
    std::memcpy(out, buf_.data() + pos_, n);
    pos_ += n;
  }
  const std::string& buf_;
  std::size_t pos_ = 0;
};

std::array<unsigned char, 32> digest_bytes(const std::string& bytes) {
  const std::string hex = sha256_hex(bytes);
  std::array<unsigned char, 32> out{};
  for (std::size_t i = 0; i < 32; ++i)
    out[i] = static_cast<unsigned char>(std::stoi(hex.substr(2 * i, 2), nullptr, 16));
  return out;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& file,
                      const CoupledCheckpoint<double>& ck,
                      const CheckpointTag& tag) {
  const Index n = ck.nodes;
  for (const auto* v : {&ck.u, &ck.ut, &ck.w, &ck.wt})
    if (v->size() != n) throw ConfigError("checkpoint vectors do not match N");
  Writer w;
  w.bytes().append(kMagic, sizeof kMagic);
  w.put(kVersion);
  w.put(static_cast<std::uint32_t>(sizeof(double)));
  w.put(tag.p);
  w.put(tag.s);
  w.put(static_cast<std::int64_t>(tag.J));
  w.put(tag.horizon);
  w.put(tag.dt);
  w.put(ck.length);
  w.put(static_cast<std::int64_t>(n));
  w.put(ck.t);
  w.put(static_cast<std::int64_t>(ck.step));
  w.put(ck.u0_norm);
  for (const auto* v : {&ck.u, &ck.ut, &ck.w, &ck.wt}) w.put_vector(*v);
  for (double x : {ck.energy_v0, ck.energy_window_max, ck.hs_u0, ck.sup_hs_u,
                   ck.hsc_w0, ck.sup_hsc_w})
    w.put(x);
  w.put(static_cast<std::uint64_t>(ck.accumulators.size()));
  for (const auto& a : ck.accumulators) {
    w.put(a.sum);
    w.put(a.last);
    w.put(a.last_t);
    w.put(static_cast<std::int64_t>(a.count));
  }
  w.put(static_cast<std::uint64_t>(ck.samples.size()));
  for (const auto& s : ck.samples)
    for (double x : {s.t, s.energy_v, s.hs_u, s.hsc_w, s.lpp1_u, s.linf_u,
                     s.boundary_tail_l2})
      w.put(x);
  const auto digest = digest_bytes(w.bytes());
  w.bytes().append(reinterpret_cast<const char*>(digest.data()), digest.size());

  // Write beside the target and rename so a crash never leaves half a file.
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(tmp.string() + ": cannot write checkpoint");
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw ConfigError(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, file);
}

CoupledCheckpoint<double> read_checkpoint(const std::filesystem::path& file,
                                          CheckpointTag* tag) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError(file.string() + ": cannot open checkpoint");
  std::ostringstream os;
  os << in.rdbuf();
  std::string bytes = os.str();
  if (bytes.size() < sizeof kMagic + 8 + 32)
    throw InputError(file.string() + ": checkpoint is truncated");
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw InputError(file.string() + ": not a checkpoint file");
  const std::string body = bytes.substr(0, bytes.size() - 32);
  const auto digest = digest_bytes(body);
  if (std::memcmp(digest.data(), bytes.data() + body.size(), 32) != 0)
    throw InputError(file.string() + ": checkpoint checksum mismatch");

  Reader r(body);
  r.get<std::array<char, 8>>();
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion)
    throw InputError(file.string() + ": unsupported checkpoint version " +
                     std::to_string(version));
  if (r.get<std::uint32_t>() != sizeof(double))
    throw InputError(file.string() + ": checkpoint scalar size differs");
  CheckpointTag t;
  t.p = r.get<double>();
  t.s = r.get<double>();
  t.J = static_cast<int>(r.get<std::int64_t>());
  t.horizon = r.get<double>();
  t.dt = r.get<double>();
  if (tag) *tag = t;

  CoupledCheckpoint<double> ck;
  ck.length = r.get<double>();
  ck.nodes = static_cast<Index>(r.get<std::int64_t>());
  if (ck.nodes < 1 || static_cast<std::size_t>(ck.nodes) > r.remaining() / 32)
    throw InputError(file.string() + ": checkpoint node count is corrupt");
  ck.t = r.get<double>();
  ck.step = static_cast<Index>(r.get<std::int64_t>());
  ck.u0_norm = r.get<double>();
  ck.u = r.get_vector(ck.nodes);
  ck.ut = r.get_vector(ck.nodes);
  ck.w = r.get_vector(ck.nodes);
  ck.wt = r.get_vector(ck.nodes);
  ck.energy_v0 = r.get<double>();
  ck.energy_window_max = r.get<double>();
  ck.hs_u0 = r.get<double>();
  ck.sup_hs_u = r.get<double>();
  ck.hsc_w0 = r.get<double>();
  ck.sup_hsc_w = r.get<double>();
  const auto acc = r.get<std::uint64_t>();
  if (acc > r.remaining() / 32)
    throw InputError(file.string() + ": checkpoint accumulator count is corrupt");
  for (std::uint64_t i = 0; i < acc; ++i) {
    MixedNormAccumulator<double>::State s;
    s.sum = r.get<double>();
    s.last = r.get<double>();
    s.last_t = r.get<double>();
    s.count = static_cast<Index>(r.get<std::int64_t>());
    ck.accumulators.push_back(s);
  }
  const auto samples = r.get<std::uint64_t>();
  if (samples != r.remaining() / (7 * sizeof(double)) ||
      r.remaining() % (7 * sizeof(double)) != 0)
    throw InputError(file.string() + ": checkpoint sample count is corrupt");
  for (std::uint64_t i = 0; i < samples; ++i) {
    CoupledSample<double> s;
    s.t = r.get<double>();
    s.energy_v = r.get<double>();
    s.hs_u = r.get<double>();
    s.hsc_w = r.get<double>();
    s.lpp1_u = r.get<double>();
    s.linf_u = r.get<double>();
    s.boundary_tail_l2 = r.get<double>();
    ck.samples.push_back(s);
  }
  return ck;
}

}  // namespace radwave::runs

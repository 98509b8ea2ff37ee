#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "radwave/runs.hpp"

#ifndef RADWAVE_VERSION
#define RADWAVE_VERSION "unknown"
#endif

namespace radwave::runs {

using nlohmann::json;

std::string version() { return RADWAVE_VERSION; }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_text(const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i)
    out += (i ? "," : "") + columns[i];
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw ConfigError("CSV row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + format_number(row[i]);
    out += '\n';
  }
  return out;
}

const std::vector<std::string>& timeseries_columns() {
  static const std::vector<std::string> c{
      "t", "energy_v", "hs_u", "hsc_w", "lpp1_u", "linf_u", "boundary_tail_l2"};
  return c;
}

const std::vector<std::string>& truncation_columns() {
  static const std::vector<std::string> c{
      "J",        "T",         "E0_v",       "E_T",            "sup_hs_u",
      "sup_hsc_w", "st_w_L2Lq", "fitted_ET_slope", "fitted_hs_slope"};
  return c;
}

std::string timeseries_csv(const std::vector<CoupledSample<double>>& samples) {
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples)
    rows.push_back({s.t, s.energy_v, s.hs_u, s.hsc_w, s.lpp1_u, s.linf_u,
                    s.boundary_tail_l2});
  return csv_text(timeseries_columns(), rows);
}

std::string truncation_csv(const TruncationTable& table) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : table.rows)
    rows.push_back({static_cast<double>(r.J), r.T, r.E0_v, r.E_T, r.sup_hs_u,
                    r.sup_hsc_w, r.st_w_L2Lq, table.fitted_ET_slope,
                    table.fitted_hs_slope});
  return csv_text(truncation_columns(), rows);
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << int(md[i]);
  return os.str();
}

namespace {

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(path.string() + ": cannot write");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw ConfigError(path.string() + ": write failed");
}

json resolved(const RunConfig& cfg) {
  json r;
  r["p"] = cfg.params.p;
  r["s"] = cfg.params.s;
  r["J"] = cfg.js;
  r["grid"] = {{"L", cfg.length}, {"N", cfg.nodes}};
  r["dt"] = cfg.dt;
  json horizons = json::array();
  for (int J : cfg.js) {
    try {
      horizons.push_back(cfg.horizon_for(J));
    } catch (const ConfigError&) {
      horizons.push_back(nullptr);
    }
  }
  r["T"] = horizons;
  r["stride"] = cfg.stride;
  r["boundary_tolerance"] = cfg.boundary_tolerance;
  r["guard_margin"] = cfg.guard_margin;
  r["data"] = {{"kind", to_string(cfg.data.kind)},
               {"seed", cfg.data.seed},
               {"amplitude", cfg.data.amplitude}};
  return r;
}

json exponents(const RunConfig& cfg) {
  try {
    const auto e = derived_exponents(cfg.params);
    return {{"s_c", e.critical},
            {"s_min", e.threshold},
            {"s_min_rational", rational_string(e.threshold)},
            {"energy_growth", e.energy_growth},
            {"theorem_growth", e.theorem_growth}};
  } catch (const ConfigError&) {
    return nullptr;
  }
}

}  // namespace

RunDirectory::RunDirectory(std::filesystem::path dir, std::string command,
                           const RunConfig& cfg, bool force, bool resume)
    : dir_(std::move(dir)), start_(std::chrono::steady_clock::now()) {
  const auto manifest = dir_ / "manifest.json";
  if (std::filesystem::exists(manifest) && !force && !resume)
    throw ConfigError("out: " + dir_.string() +
                      " already holds a run; pass --force to overwrite");
  if (resume && !std::filesystem::exists(manifest))
    throw ConfigError("out: " + dir_.string() + " has no run to resume");
  std::filesystem::create_directories(dir_);
  manifest_ = {{"format", 1},
               {"command", std::move(command)},
               {"code_version", version()},
               {"config", cfg.echo},
               {"resolved", resolved(cfg)},
               {"derived_exponents", exponents(cfg)},
               {"started_utc", utc_now()},
               {"status", "running"},
               {"resumed", resume},
               {"outputs", json::array()}};
  write_manifest();
}

void RunDirectory::write(const std::string& name, const std::string& body) {
  write_file(dir_ / name, body);
  auto& outs = manifest_["outputs"];
  for (auto& o : outs)
    if (o["file"] == name) {
      o["sha256"] = sha256_hex(body);
      o["bytes"] = body.size();
      return;
    }
  outs.push_back({{"file", name},
                  {"sha256", sha256_hex(body)},
                  {"bytes", body.size()},
                  {"valid", true}});
}

void RunDirectory::record(const std::string& name) {
  std::ifstream in(dir_ / name, std::ios::binary);
  if (!in) throw ConfigError((dir_ / name).string() + ": cannot read back");
  std::ostringstream os;
  os << in.rdbuf();
  auto& outs = manifest_["outputs"];
  for (auto& o : outs)
    if (o["file"] == name) {
      o["sha256"] = sha256_hex(os.str());
      o["bytes"] = os.str().size();
      return;
    }
  outs.push_back({{"file", name},
                  {"sha256", sha256_hex(os.str())},
                  {"bytes", os.str().size()},
                  {"valid", true}});
}

void RunDirectory::stop() {
  if (finished_) return;
  finished_ = true;
  manifest_["status"] = "stopped";
  manifest_["finished_utc"] = utc_now();
  manifest_["elapsed_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
          .count();
  for (auto& o : manifest_["outputs"]) o["valid"] = false;
  write_manifest();
}

void RunDirectory::finish() {
  if (finished_) return;
  finished_ = true;
  manifest_["status"] = "complete";
  manifest_["finished_utc"] = utc_now();
  manifest_["elapsed_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
          .count();
  write_manifest();
}

void RunDirectory::fail(const std::string& kind, const std::string& message,
                        std::optional<double> time) {
  if (finished_) return;
  finished_ = true;
  manifest_["status"] = "failed";
  manifest_["finished_utc"] = utc_now();
  manifest_["elapsed_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
          .count();
  json failure = {{"kind", kind}, {"message", message}};
  failure["time"] = time ? json(*time) : json(nullptr);
  manifest_["failure"] = failure;
  for (auto& o : manifest_["outputs"]) o["valid"] = false;
  write_manifest();
}

void RunDirectory::write_manifest() {
  write_file(dir_ / "manifest.json", manifest_.dump(2) + "\n");
}

}  // namespace radwave::runs

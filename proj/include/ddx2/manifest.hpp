#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <string>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "ddx2/error.hpp"

namespace ddx2 {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point t = std::chrono::system_clock::now()) {
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string tool_version = kToolVersion;
  std::string started;
  std::string finished;
  std::string result_digest;  // SHA-256 of the result file contents
  std::string status = "complete";

  nlohmann::ordered_json to_json() const {
    return {{"command", command},       {"parameters", parameters}, {"tool_version", tool_version},
            {"started", started},       {"finished", finished},     {"result_digest", result_digest},
            {"status", status}};
  }

  static RunManifest from_json(const nlohmann::ordered_json& j) {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.started = j.at("started").get<std::string>();
    m.finished = j.at("finished").get<std::string>();
    m.result_digest = j.at("result_digest").get<std::string>();
    m.status = j.value("status", "complete");
    return m;
  }
};

inline std::string manifest_path(const std::string& output) { return output + ".manifest.json"; }

/// Writes the result file and its manifest sidecar. `results` is the exact
/// byte content of the result file.
inline void write_results(const std::string& output, const std::string& results, RunManifest manifest) {
  {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw Error("cannot write " + output);
    out << results;
  }
  manifest.result_digest = sha256_hex(results);
  std::ofstream side(manifest_path(output));
  if (!side) throw Error("cannot write " + manifest_path(output));
  side << manifest.to_json().dump(2) << '\n';
}

} // namespace ddx2

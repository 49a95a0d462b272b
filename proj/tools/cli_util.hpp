// Copyright 2026 The epsaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Helpers shared by the CLI subcommands. The CLI talks to the library
// exclusively through the C interface in epsaudit.h.

#ifndef EPSAUDIT_TOOLS_CLI_UTIL_HPP_
#define EPSAUDIT_TOOLS_CLI_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "epsaudit.h"
#include "json.hpp"

namespace cli {

using nlohmann::json;

// Exit codes of every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInapplicable = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitEstimationFailed = 4;
inline constexpr int kExitConfigError = 5;

struct CliError : std::runtime_error {
  CliError(int code_in, const std::string& what) : std::runtime_error(what), code(code_in) {}
  int code;
};

inline void check_status(epsaudit_status status, const std::string& context) {
  if (status == EPSAUDIT_OK) return;
  const std::string message =
      context + ": " + epsaudit_status_name(status) + " (" + epsaudit_last_error() + ")";
  switch (status) {
    case EPSAUDIT_ERROR_INAPPLICABLE:
      throw CliError(kExitInapplicable, message);
    case EPSAUDIT_ERROR_INFEASIBLE:
      throw CliError(kExitInfeasible, message);
    case EPSAUDIT_ERROR_ESTIMATION_FAILED:
      throw CliError(kExitEstimationFailed, message);
    default:
      throw CliError(kExitConfigError, message);
  }
}

// Full-precision number formatting for files: every double round-trips.
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

inline std::string num(std::uint64_t v) { return std::to_string(v); }
inline std::string num(std::int32_t v) { return std::to_string(v); }

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path) {
    if (!out_) throw CliError(kExitConfigError, "cannot open " + path.string());
    write_row(header);
  }

  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

struct Mechanism {
  std::unique_ptr<epsaudit_mechanism, decltype(&epsaudit_mechanism_free)> handle{
      nullptr, &epsaudit_mechanism_free};
  std::string kind;
  std::map<std::string, double> params;

  epsaudit_mechanism* get() const { return handle.get(); }
  bool discrete() const { return epsaudit_mechanism_is_discrete(handle.get()) != 0; }

  json to_json() const {
    json j;
    j["kind"] = kind;
    for (const auto& [key, value] : params) j[key] = value;
    return j;
  }
};

// Parses "kind:key=value,key=value". Understood kinds and keys:
//   trunc-laplace: B (or scale)
//   trunc-gaussian: sigma
//   krr: k, eps
//   adversarial-bernoulli: d, h, alpha ("inf" allowed)
inline Mechanism make_mechanism(const std::string& spec, double z_lo, double z_hi) {
  Mechanism m;
  const auto colon = spec.find(':');
  m.kind = spec.substr(0, colon);
  if (colon != std::string::npos) {
    std::stringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw CliError(kExitConfigError, "mechanism parameter needs key=value: " + item);
      }
      const std::string key = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      m.params[key] = value == "inf" ? std::numeric_limits<double>::infinity()
                                     : std::stod(value);
    }
  }

  auto param = [&](const std::string& key, const char* alt = nullptr) {
    auto it = m.params.find(key);
    if (it == m.params.end() && alt != nullptr) it = m.params.find(alt);
    if (it == m.params.end()) {
      throw CliError(kExitConfigError, m.kind + " needs parameter '" + key + "'");
    }
    return it->second;
  };

  epsaudit_mechanism* raw = nullptr;
  if (m.kind == "trunc-laplace") {
    check_status(epsaudit_trunc_laplace_create(param("B", "scale"), z_lo, z_hi, &raw),
                 "trunc-laplace");
  } else if (m.kind == "trunc-gaussian") {
    check_status(epsaudit_trunc_gaussian_create(param("sigma"), z_lo, z_hi, &raw),
                 "trunc-gaussian");
  } else if (m.kind == "krr") {
    check_status(
        epsaudit_krr_create(static_cast<int>(param("k")), param("eps"), &raw), "krr");
  } else if (m.kind == "adversarial-bernoulli") {
    check_status(epsaudit_adversarial_bernoulli_create(param("d"), param("h"),
                                                       param("alpha"), &raw),
                 "adversarial-bernoulli");
  } else {
    throw CliError(kExitConfigError, "unknown mechanism kind: " + m.kind);
  }
  m.handle.reset(raw);
  return m;
}

inline json plan_to_json(const epsaudit_ldp_plan& plan) {
  return json{{"gamma", plan.gamma},
              {"delta", plan.delta},
              {"claimed_c", plan.lipschitz_c},
              {"z_interval", {plan.z_lo, plan.z_hi}},
              {"tau", plan.tau},
              {"m", plan.m},
              {"w", plan.w},
              {"n", plan.n},
              {"guarantee", plan.theoretical != 0 ? "theoretical" : "practical-no-guarantee"}};
}

inline json plan_to_json(const epsaudit_lrdp_plan& plan) {
  return json{{"alpha", plan.alpha},
              {"gamma", plan.gamma},
              {"delta", plan.delta},
              {"claimed_c", plan.lipschitz_c},
              {"z_interval", {plan.z_lo, plan.z_hi}},
              {"tau0", plan.tau0},
              {"tau1", plan.tau1},
              {"K", plan.k_upper},
              {"K_prime", plan.k_lower},
              {"gamma_prime", plan.gamma_prime},
              {"m", plan.m},
              {"w", plan.w},
              {"n", plan.n},
              {"guarantee", plan.theoretical != 0 ? "theoretical" : "practical-no-guarantee"}};
}

inline json plan_to_json(const epsaudit_discrete_plan& plan) {
  return json{{"gamma", plan.gamma},
              {"delta", plan.delta},
              {"p_min", plan.p_min},
              {"m", plan.m},
              {"n", plan.n},
              {"guarantee", plan.theoretical != 0 ? "theoretical" : "practical-no-guarantee"}};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw CliError(kExitConfigError, "cannot open " + path.string());
  out << text;
}

}  // namespace cli

#endif  // EPSAUDIT_TOOLS_CLI_UTIL_HPP_

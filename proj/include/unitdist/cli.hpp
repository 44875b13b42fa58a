/*
   Copyright 2026 The unitdist Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Subcommands of the unitdist tool. Each writes its payload to `out`,
// diagnostics to `err`, and returns the process exit code.

#ifndef UNITDIST_CLI_HPP
#define UNITDIST_CLI_HPP

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "unitdist/serialization.hpp"

namespace unitdist::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageOrIo = 1,
  kInvalid = 2,
  kSearchEmpty = 3,
  kShiftWarning = 4,
  kBudgetExceeded = 5,
};

inline int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  std::optional<TowerCertificate> cert;
  try {
    cert = load_certificate(path);
  } catch (const DocumentError& e) {
    err << "verify: " << e.what() << '\n';
    return kUsageOrIo;
  }
  const auto report = validate(*cert);
  json doc;
  doc["certificate"] = certificate_to_json(*cert);
  doc["validation"] = to_json(report);
  if (report.valid) {
    doc["delta"] = to_json(delta(*cert));
  } else {
    for (const auto& c : report.checks) {
      if (!c.passed) err << "verify: check " << c.name << " failed: " << c.diagnostic << '\n';
    }
  }
  out << doc.dump(2) << '\n';
  return report.valid ? kOk : kInvalid;
}

/// Without a config path the default search space is used.
inline int cmd_optimize(const std::optional<std::string>& configPath, std::ostream& out,
                        std::ostream& err) {
  SearchConfig config;
  if (configPath) {
    std::ifstream in(*configPath);
    if (!in) {
      err << "optimize: cannot open " << *configPath << '\n';
      return kUsageOrIo;
    }
    try {
      json j;
      in >> j;
      config = search_config_from_json(j);
    } catch (const std::exception& e) {
      err << "optimize: " << e.what() << '\n';
      return kUsageOrIo;
    }
  }
  try {
    const auto result = optimize(config);
    out << to_json(result).dump(2) << '\n';
  } catch (const SearchEmptyError& e) {
    err << "optimize: " << e.what() << '\n';
    return kSearchEmpty;
  }
  return kOk;
}

inline int cmd_upperbound(std::optional<double> c, std::optional<std::pair<double, double>> bracket,
                          double tol, std::ostream& out, std::ostream& err) {
  if (c.has_value() == bracket.has_value()) {
    err << "upperbound: give exactly one of --c or --search\n";
    return kUsageOrIo;
  }
  try {
    UpperBoundReport report;
    if (c) {
      if (!(*c > 0.0)) {
        err << "upperbound: c must be positive\n";
        return kUsageOrIo;
      }
      if (std::exp2(*c) >= static_cast<double>(kUpperBoundPrimeLimit)) {
        err << "upperbound: 2^c exceeds the prime table; gValue is a lower bound\n";
      }
      report = upper_bound_at(*c);
    } else {
      report = exponent_upper_bound(bracket->first, bracket->second, tol);
    }
    out << to_json(report).dump(2) << '\n';
  } catch (const UpperBoundError& e) {
    err << "upperbound: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}

struct ConstructOptions {
  int n = 4;
  std::string alpha;
  std::string R;
  std::uint64_t seed = 0;
  std::optional<std::string> out;  // prefix for <out>.csv and <out>.json
  int trials = 64;
  std::uint64_t budget = kDefaultElementBudget;
};

inline int cmd_construct(const ConstructOptions& opt, std::ostream& out, std::ostream& err) {
  ConstructionRecord rec;
  std::optional<ScaledLattice> lat;
  std::optional<PointSet> ps;
  try {
    const auto alpha = parse_alpha(opt.n, opt.alpha);
    const auto R = parse_rational(opt.R);
    if (!(R > 1)) {
      err << "construct: R must exceed 1\n";
      return kUsageOrIo;
    }
    rec.n = opt.n;
    rec.alpha = alpha;
    rec.R = R.convert_to<double>();
    lat.emplace(opt.n, alpha);
    rec.shift = choose_shift(*lat, rec.R, opt.trials, opt.seed, opt.budget);
    ps = build_point_set(*lat, rec.R, rec.shift.w, opt.budget);
    rec.count = count_unit_distances(*ps, *lat);
  } catch (const BudgetExceeded& e) {
    err << "construct: " << e.what() << '\n';
    return kBudgetExceeded;
  } catch (const std::invalid_argument& e) {
    err << "construct: " << e.what() << '\n';
    return kUsageOrIo;
  } catch (const std::logic_error& e) {
    // exact and numeric unit-distance predicates disagree
    err << "construct: internal error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    err << "construct: " << e.what() << '\n';
    return kUsageOrIo;
  }
  rec.boundaryFlagged = ps->boundaryFlagged;
  rec.ratioGuarantee = ratio_guarantee_holds(rec.count, rec.R, lat->d());
  if (rec.boundaryFlagged > 0) {
    err << "construct: " << rec.boundaryFlagged << " points lie within the boundary band\n";
  }

  const json doc = to_json(rec);
  if (opt.out) {
    std::ofstream csv(*opt.out + ".csv");
    std::ofstream side(*opt.out + ".json");
    if (!csv || !side) {
      err << "construct: cannot write " << *opt.out << ".{csv,json}\n";
      return kUsageOrIo;
    }
    write_point_csv(csv, *ps);
    side << doc.dump(2) << '\n';
  }
  out << doc.dump(2) << '\n';
  if (rec.shift.warning) {
    err << "construct: no sampled shift met the count inequality; using the best one\n";
    return kShiftWarning;
  }
  return kOk;
}

/// Parses argv and dispatches. Parse failures return 1; --help returns 0.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unit distance certificates, bounds and lattice constructions"};
  app.require_subcommand(1);

  std::string verifyPath;
  auto* verify = app.add_subcommand("verify", "Validate a certificate and evaluate delta");
  verify->add_option("certificate", verifyPath, "Certificate JSON file")->required();

  std::string configPath;
  auto* opt = app.add_subcommand("optimize", "Search for a certificate with large delta");
  opt->add_option("config", configPath, "Search config JSON file");

  double c = 0.0;
  std::vector<double> bracket;
  double tol = 1e-8;
  auto* ub = app.add_subcommand("upperbound", "Evaluate g(c) or search for the exponent bound");
  auto* cOpt = ub->add_option("--c", c, "Evaluate g at this c");
  auto* sOpt = ub->add_option("--search", bracket, "Bracket lo hi for the search")->expected(2);
  ub->add_option("--tol", tol, "Bisection tolerance");
  cOpt->excludes(sOpt);

  ConstructOptions co;
  std::string outPrefix;
  auto* con = app.add_subcommand("construct", "Build a point set from a scaled lattice");
  con->add_option("--n", co.n, "Cyclotomic conductor (4, 8 or 12)")->required()->check(CLI::IsMember({4, 8, 12}));
  con->add_option("--alpha", co.alpha, "Totally positive alpha as x or x,y")->required();
  con->add_option("--R", co.R, "Radius as a rational a/b")->required();
  con->add_option("--seed", co.seed, "Shift RNG seed");
  con->add_option("--out", outPrefix, "Output prefix for .csv and .json");
  con->add_option("--trials", co.trials, "Number of sampled shifts")->check(CLI::PositiveNumber);
  con->add_option("--budget", co.budget, "Maximum lattice candidates per enumeration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsageOrIo;
  }

  if (verify->parsed()) return cmd_verify(verifyPath, out, err);
  if (opt->parsed()) {
    return cmd_optimize(configPath.empty() ? std::nullopt : std::optional<std::string>(configPath), out, err);
  }
  if (ub->parsed()) {
    std::optional<double> cv;
    std::optional<std::pair<double, double>> br;
    if (cOpt->count() > 0) cv = c;
    if (sOpt->count() > 0) br = std::make_pair(bracket[0], bracket[1]);
    return cmd_upperbound(cv, br, tol, out, err);
  }
  if (!outPrefix.empty()) co.out = outPrefix;
  return cmd_construct(co, out, err);
}

}  // namespace unitdist::cli

#endif  // UNITDIST_CLI_HPP

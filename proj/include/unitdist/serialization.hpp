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

// JSON and CSV formats shared by the command-line tool and the tests.

#ifndef UNITDIST_SERIALIZATION_HPP
#define UNITDIST_SERIALIZATION_HPP

#include <climits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "unitdist/certificate.hpp"
#include "unitdist/lattice_lab.hpp"
#include "unitdist/optimizer.hpp"
#include "unitdist/upperbound.hpp"

namespace unitdist {

using json = nlohmann::json;

class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown_fields(const json& j, const std::set<std::string>& allowed,
                                  const std::string& what) {
  if (!j.is_object()) throw DocumentError(what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw DocumentError("unknown field '" + key + "' in " + what);
  }
}

template <class T>
T required(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw DocumentError("missing field '" + std::string(key) + "' in " + what);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DocumentError("field '" + std::string(key) + "' in " + what + ": " + e.what());
  }
}

inline std::uint64_t positive_integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw DocumentError(what + " must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < 1) throw DocumentError(what + " must be positive");
  return static_cast<std::uint64_t>(x);
}

// Six significant digits.
inline double round_significant(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::stod(buf);
}

inline json prime_map_to_json(const std::map<std::uint64_t, double>& m) {
  json out = json::object();
  for (const auto& [p, v] : m) out[std::to_string(p)] = v;
  return out;
}

inline std::map<std::uint64_t, double> prime_map_from_json(const json& j) {
  std::map<std::uint64_t, double> out;
  for (const auto& [key, value] : j.items()) out.emplace(std::stoull(key), value.get<double>());
  return out;
}

}  // namespace detail

// ---- rationals ---------------------------------------------------------

/// Parses "a" or "a/b" exactly.
inline BigRational parse_rational(const std::string& text) {
  static const std::regex kRational(R"(-?[0-9]+(/-?[0-9]+)?)");
  if (!std::regex_match(text, kRational)) throw DocumentError("not a rational number: '" + text + "'");
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return BigRational(BigInt(text));
    const BigInt num(text.substr(0, slash));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) throw DocumentError("zero denominator in '" + text + "'");
    return BigRational(num) / BigRational(den);
  } catch (const DocumentError&) {
    throw;
  } catch (const std::exception&) {
    throw DocumentError("not a rational number: '" + text + "'");
  }
}

/// "x" (n = 4) or "x,y" (n = 8, 12) as an element of the real subfield of Q(zeta_n).
inline RealQuadElement parse_alpha(int n, const std::string& text) {
  const int m = real_subfield_m(n);
  const auto comma = text.find(',');
  if (comma == std::string::npos) return RealQuadElement(m, parse_rational(text));
  const auto y = parse_rational(text.substr(comma + 1));
  if (m == 1 && y != 0) throw DocumentError("alpha must be rational for n = 4");
  return RealQuadElement(m, parse_rational(text.substr(0, comma)), y);
}

inline std::string rational_string(const BigRational& q) { return q.str(); }

// ---- certificates ------------------------------------------------------

inline TowerCertificate certificate_from_json(const json& j) {
  const std::string what = "certificate";
  detail::reject_unknown_fields(j, {"T", "SQ", "R", "t"}, what);
  if (!j.contains("T") || !j["T"].is_array()) throw DocumentError("certificate needs array 'T'");
  if (!j.contains("SQ") || !j["SQ"].is_array()) throw DocumentError("certificate needs array 'SQ'");
  std::vector<std::uint64_t> T;
  for (const auto& q : j["T"]) T.push_back(detail::positive_integer(q, "T entry"));
  std::map<std::uint64_t, int> k;
  for (const auto& entry : j["SQ"]) {
    detail::reject_unknown_fields(entry, {"p", "k"}, "SQ entry");
    if (!entry.contains("p") || !entry.contains("k")) throw DocumentError("SQ entry needs p and k");
    const auto p = detail::positive_integer(entry["p"], "SQ prime");
    if (!entry["k"].is_number_integer()) throw DocumentError("k must be an integer");
    const auto kp = entry["k"].get<std::int64_t>();
    if (kp < 1 || kp > INT_MAX) throw DocumentError("k(" + std::to_string(p) + ") out of range");
    if (!k.emplace(p, static_cast<int>(kp)).second) {
      throw DocumentError("SQ lists " + std::to_string(p) + " twice");
    }
  }
  if (!j.contains("R") || !j["R"].is_number()) throw DocumentError("certificate needs number 'R'");
  std::optional<double> t;
  if (j.contains("t")) {
    if (!j["t"].is_number()) throw DocumentError("t must be a number");
    t = j["t"].get<double>();
  }
  try {
    return TowerCertificate(std::move(T), std::move(k), j["R"].get<double>(), t);
  } catch (const CertificateError& e) {
    throw DocumentError(e.what());
  }
}

inline json certificate_to_json(const TowerCertificate& cert) {
  json out;
  out["T"] = cert.T();
  json sq = json::array();
  for (const auto& [p, kp] : cert.k()) sq.push_back({{"p", p}, {"k", kp}});
  out["SQ"] = sq;
  out["R"] = cert.R();
  if (cert.t()) out["t"] = *cert.t();
  return out;
}

inline TowerCertificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DocumentError(std::string("malformed JSON: ") + e.what());
  }
  return certificate_from_json(j);
}

// ---- reports -----------------------------------------------------------

inline json to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"diagnostic", c.diagnostic}});
  }
  return {{"valid", r.valid},
          {"checks", checks},
          {"infinitudeLHS", r.infinitudeLHS},
          {"infinitudeRHS", rational_string(r.infinitudeRHS)}};
}

inline ValidationReport validation_report_from_json(const json& j) {
  detail::reject_unknown_fields(j, {"valid", "checks", "infinitudeLHS", "infinitudeRHS"},
                                "validation report");
  ValidationReport r;
  r.valid = detail::required<bool>(j, "valid", "validation report");
  for (const auto& c : j.at("checks")) {
    r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                        c.at("diagnostic").get<std::string>()});
  }
  r.infinitudeLHS = detail::required<std::int64_t>(j, "infinitudeLHS", "validation report");
  r.infinitudeRHS = parse_rational(detail::required<std::string>(j, "infinitudeRHS", "validation report"));
  return r;
}

inline json to_json(const DeltaReport& r) {
  return {{"delta", detail::round_significant(r.delta)},
          {"delta_full", r.delta},
          {"numerator", r.numerator},
          {"denominator", r.denominator},
          {"lambda", r.lambda},
          {"perPrimeNumerator", detail::prime_map_to_json(r.perPrimeNumerator)},
          {"perPrimeDenominator", detail::prime_map_to_json(r.perPrimeDenominator)},
          {"components",
           {{"logOneMinusInvR", r.logOneMinusInvR},
            {"halfLogTwoPiOverE", r.halfLogTwoPiOverE},
            {"logLambdaTerm", r.logLambdaTerm},
            {"logLogLambdaTerm", r.logLogLambdaTerm},
            {"logTwoR", r.logTwoR},
            {"denominatorCorrection", r.denominatorCorrection}}}};
}

inline DeltaReport delta_report_from_json(const json& j) {
  const std::string what = "delta report";
  detail::reject_unknown_fields(j,
                                {"delta", "delta_full", "numerator", "denominator", "lambda",
                                 "perPrimeNumerator", "perPrimeDenominator", "components"},
                                what);
  DeltaReport r;
  r.delta = detail::required<double>(j, "delta_full", what);
  r.numerator = detail::required<double>(j, "numerator", what);
  r.denominator = detail::required<double>(j, "denominator", what);
  r.lambda = detail::required<double>(j, "lambda", what);
  r.perPrimeNumerator = detail::prime_map_from_json(j.at("perPrimeNumerator"));
  r.perPrimeDenominator = detail::prime_map_from_json(j.at("perPrimeDenominator"));
  const auto& c = j.at("components");
  r.logOneMinusInvR = c.at("logOneMinusInvR").get<double>();
  r.halfLogTwoPiOverE = c.at("halfLogTwoPiOverE").get<double>();
  r.logLambdaTerm = c.at("logLambdaTerm").get<double>();
  r.logLogLambdaTerm = c.at("logLogLambdaTerm").get<double>();
  r.logTwoR = c.at("logTwoR").get<double>();
  r.denominatorCorrection = c.at("denominatorCorrection").get<double>();
  return r;
}

// ---- optimizer ---------------------------------------------------------

/// Config keys are all optional. The t grid is either an explicit array
/// "tGrid" or a range {"start", "stop", "step"} under "tRange".
inline SearchConfig search_config_from_json(const json& j) {
  const std::string what = "search config";
  detail::reject_unknown_fields(j, {"tGrid", "tRange", "Tmax", "SQBound", "localSearch", "seed"}, what);
  SearchConfig cfg;
  if (j.contains("tGrid") && j.contains("tRange")) throw DocumentError("give tGrid or tRange, not both");
  if (j.contains("tGrid")) cfg.tGrid = detail::required<std::vector<double>>(j, "tGrid", what);
  if (j.contains("tRange")) {
    const auto& r = j["tRange"];
    detail::reject_unknown_fields(r, {"start", "stop", "step"}, "tRange");
    const double start = detail::required<double>(r, "start", "tRange");
    const double stop = detail::required<double>(r, "stop", "tRange");
    const double step = detail::required<double>(r, "step", "tRange");
    if (!(step > 0.0) || stop < start) throw DocumentError("tRange needs step > 0 and stop >= start");
    cfg.tGrid.clear();
    const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9));
    for (std::int64_t i = 0; i <= count; ++i) cfg.tGrid.push_back(start + static_cast<double>(i) * step);
  }
  if (j.contains("Tmax")) cfg.Tmax = detail::positive_integer(j["Tmax"], "Tmax");
  if (j.contains("SQBound")) cfg.SQBound = detail::positive_integer(j["SQBound"], "SQBound");
  if (j.contains("localSearch")) cfg.localSearch = detail::required<bool>(j, "localSearch", what);
  if (j.contains("seed")) cfg.seed = detail::required<std::uint64_t>(j, "seed", what);
  try {
    cfg.check();
  } catch (const std::invalid_argument& e) {
    throw DocumentError(e.what());
  }
  return cfg;
}

inline json to_json(const SearchConfig& cfg) {
  return {{"tGrid", cfg.tGrid},
          {"Tmax", cfg.Tmax},
          {"SQBound", cfg.SQBound},
          {"localSearch", cfg.localSearch},
          {"seed", cfg.seed}};
}

inline json to_json(const SearchResult& r) {
  json trace = json::array();
  for (const auto& e : r.trace) trace.push_back({{"summary", e.summary}, {"delta", e.delta}});
  return {{"best", certificate_to_json(r.best)}, {"bestDelta", to_json(r.bestDelta)}, {"trace", trace}};
}

inline SearchResult search_result_from_json(const json& j) {
  detail::reject_unknown_fields(j, {"best", "bestDelta", "trace"}, "search result");
  std::vector<TraceEntry> trace;
  for (const auto& e : j.at("trace")) {
    trace.push_back({e.at("summary").get<std::string>(), e.at("delta").get<double>()});
  }
  return SearchResult{certificate_from_json(j.at("best")), delta_report_from_json(j.at("bestDelta")),
                      std::move(trace)};
}

// ---- upper bound -------------------------------------------------------

inline json to_json(const UpperBoundReport& r) {
  json kStar = json::object();
  json perPrime = json::array();
  for (const auto& [p, opt] : r.perPrime) {
    if (opt.kStar > 0) kStar[std::to_string(p)] = opt.kStar;
    perPrime.push_back({{"p", p}, {"kStar", opt.kStar}, {"value", opt.value}});
  }
  return {{"c", r.c}, {"gValue", r.gValue}, {"bound", r.bound}, {"kStar", kStar}, {"perPrime", perPrime}};
}

inline UpperBoundReport upper_bound_report_from_json(const json& j) {
  detail::reject_unknown_fields(j, {"c", "gValue", "bound", "kStar", "perPrime"}, "upper bound report");
  UpperBoundReport r;
  r.c = j.at("c").get<double>();
  r.gValue = j.at("gValue").get<double>();
  r.bound = j.at("bound").get<double>();
  for (const auto& e : j.at("perPrime")) {
    r.perPrime.emplace(e.at("p").get<std::uint64_t>(),
                       PrimeOptimum{e.at("kStar").get<int>(), e.at("value").get<double>()});
  }
  return r;
}

// ---- point sets --------------------------------------------------------

struct ConstructionRecord {
  int n = 4;
  RealQuadElement alpha{1, 1};
  double R = 2.0;
  ShiftChoice shift;
  DistanceCount count;
  std::int64_t boundaryFlagged = 0;
  bool ratioGuarantee = false;
};

inline json to_json(const ConstructionRecord& rec) {
  return {{"n", rec.n},
          {"alpha", {{"m", rec.alpha.m()}, {"x", rational_string(rec.alpha.x())}, {"y", rational_string(rec.alpha.y())}}},
          {"R", rec.R},
          {"w", rec.shift.w},
          {"seed", rec.shift.seed},
          {"trialIndex", rec.shift.trialIndex},
          {"innerCount", rec.shift.innerCount},
          {"outerCount", rec.shift.outerCount},
          {"warning", rec.shift.warning},
          {"setSize", rec.count.setSize},
          {"orderedPairsAtUnit", rec.count.orderedPairsAtUnit},
          {"unorderedPairsAtUnit", rec.count.orderedPairsAtUnit / 2},
          {"ratio", rational_string(rec.count.ratio)},
          {"ratioValue", rec.count.ratio.convert_to<double>()},
          {"M", rec.count.M},
          {"numericPairsAtUnit", rec.count.numericPairsAtUnit},
          {"boundaryFlagged", rec.boundaryFlagged},
          {"ratioGuarantee", rec.ratioGuarantee}};
}

inline ConstructionRecord construction_record_from_json(const json& j) {
  detail::reject_unknown_fields(
      j,
      {"n", "alpha", "R", "w", "seed", "trialIndex", "innerCount", "outerCount", "warning", "setSize",
       "orderedPairsAtUnit", "unorderedPairsAtUnit", "ratio", "ratioValue", "M", "numericPairsAtUnit",
       "boundaryFlagged", "ratioGuarantee"},
      "construction record");
  ConstructionRecord rec;
  rec.n = j.at("n").get<int>();
  const auto& a = j.at("alpha");
  rec.alpha = RealQuadElement(a.at("m").get<int>(), parse_rational(a.at("x").get<std::string>()),
                              parse_rational(a.at("y").get<std::string>()));
  rec.R = j.at("R").get<double>();
  rec.shift.w = j.at("w").get<std::vector<double>>();
  rec.shift.seed = j.at("seed").get<std::uint64_t>();
  rec.shift.trialIndex = j.at("trialIndex").get<int>();
  rec.shift.innerCount = j.at("innerCount").get<std::int64_t>();
  rec.shift.outerCount = j.at("outerCount").get<std::int64_t>();
  rec.shift.warning = j.at("warning").get<bool>();
  rec.count.setSize = j.at("setSize").get<std::int64_t>();
  rec.count.orderedPairsAtUnit = j.at("orderedPairsAtUnit").get<std::int64_t>();
  rec.count.ratio = parse_rational(j.at("ratio").get<std::string>());
  rec.count.M = j.at("M").get<std::int64_t>();
  rec.count.numericPairsAtUnit = j.at("numericPairsAtUnit").get<std::int64_t>();
  rec.boundaryFlagged = j.at("boundaryFlagged").get<std::int64_t>();
  rec.ratioGuarantee = j.at("ratioGuarantee").get<bool>();
  return rec;
}

/// CSV with header "x,y" and 17 significant digits per coordinate.
inline void write_point_csv(std::ostream& os, const PointSet& ps) {
  os << "x,y\n";
  os << std::setprecision(17);
  for (const auto& [x, y] : ps.projected) os << x << ',' << y << '\n';
}

}  // namespace unitdist

#endif  // UNITDIST_SERIALIZATION_HPP

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

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "unitdist/serialization.hpp"

namespace {

using unitdist::BigRational;
using unitdist::DocumentError;
using unitdist::json;

unitdist::TowerCertificate bundled() { return unitdist::load_certificate(UNITDIST_DATA_DIR "/paper.json"); }

TEST(CertificateDocument, BundledFileLoads) {
  const auto cert = bundled();
  EXPECT_EQ(cert.T().size(), 13u);
  EXPECT_EQ(cert.k().size(), 22u);
  EXPECT_EQ(cert.R(), 72.0);
  EXPECT_EQ(cert.t(), std::optional<double>(35.5));
}

TEST(CertificateDocument, RoundTrip) {
  const auto cert = bundled();
  const auto j = unitdist::certificate_to_json(cert);
  const auto again = unitdist::certificate_from_json(j);
  EXPECT_EQ(again, cert);
  EXPECT_EQ(unitdist::certificate_to_json(again).dump(), j.dump());
}

TEST(CertificateDocument, UnsortedInputIsNormalized) {
  const auto j = json::parse(R"({"T":[7,3,5],"SQ":[{"p":13,"k":2},{"p":5,"k":1}],"R":4.5})");
  const auto cert = unitdist::certificate_from_json(j);
  EXPECT_EQ(cert.T(), (std::vector<std::uint64_t>{3, 5, 7}));
  EXPECT_EQ(cert.S_Q(), (std::vector<std::uint64_t>{5, 13}));
  EXPECT_FALSE(cert.t().has_value());
}

TEST(CertificateDocument, RejectsMalformedDocuments) {
  const char* bad[] = {
      R"({"T":[3],"SQ":[{"p":5,"k":1}],"R":4,"extra":1})",
      R"({"T":[3],"SQ":[{"p":5,"k":1,"q":2}],"R":4})",
      R"({"T":[3],"SQ":[{"p":5,"k":1}]})",
      R"({"SQ":[{"p":5,"k":1}],"R":4})",
      R"({"T":[3],"SQ":[{"p":5,"k":0}],"R":4})",
      R"({"T":[3],"SQ":[{"p":5,"k":1},{"p":5,"k":2}],"R":4})",
      R"({"T":[3,3],"SQ":[{"p":5,"k":1}],"R":4})",
      R"({"T":[3],"SQ":[{"p":5,"k":1.5}],"R":4})",
      R"({"T":[-3],"SQ":[{"p":5,"k":1}],"R":4})",
      R"({"T":[3],"SQ":[{"p":5,"k":1}],"R":"4"})",
      R"({"T":[3],"SQ":[{"p":5,"k":1}],"R":1})",
      R"({"T":[],"SQ":[{"p":5,"k":1}],"R":4})",
      R"([1,2,3])",
  };
  for (const char* text : bad) {
    EXPECT_THROW(unitdist::certificate_from_json(json::parse(text)), DocumentError) << text;
  }
}

TEST(Reports, ValidationRoundTrip) {
  const auto report = unitdist::validate(bundled());
  const auto j = unitdist::to_json(report);
  const auto again = unitdist::validation_report_from_json(j);
  EXPECT_EQ(unitdist::to_json(again).dump(), j.dump());
  EXPECT_EQ(j["infinitudeRHS"], "36");
}

TEST(Reports, DeltaRoundTripAndSixDigitField) {
  const auto d = unitdist::delta(bundled());
  const auto j = unitdist::to_json(d);
  EXPECT_EQ(j["delta"].get<double>(), 0.0141144);
  EXPECT_EQ(j["delta_full"].get<double>(), d.delta);
  const auto again = unitdist::delta_report_from_json(json::parse(j.dump()));
  EXPECT_EQ(unitdist::to_json(again).dump(), j.dump());
  EXPECT_EQ(again.delta, d.delta);
}

TEST(Reports, SearchConfigDefaultsAndRange) {
  const auto cfg = unitdist::search_config_from_json(json::object());
  EXPECT_EQ(cfg.tGrid, unitdist::SearchConfig{}.tGrid);
  const auto ranged = unitdist::search_config_from_json(
      json::parse(R"({"tRange":{"start":1,"stop":3,"step":0.5},"Tmax":50,"localSearch":false,"seed":4})"));
  EXPECT_EQ(ranged.tGrid, (std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0}));
  EXPECT_EQ(ranged.Tmax, 50u);
  EXPECT_FALSE(ranged.localSearch);
  const auto j = unitdist::to_json(ranged);
  EXPECT_EQ(unitdist::to_json(unitdist::search_config_from_json(j)).dump(), j.dump());
  EXPECT_THROW(unitdist::search_config_from_json(json::parse(R"({"tmax":3})")), DocumentError);
  EXPECT_THROW(unitdist::search_config_from_json(json::parse(R"({"tGrid":[]})")), DocumentError);
  EXPECT_THROW(unitdist::search_config_from_json(json::parse(R"({"Tmax":2})")), DocumentError);
}

TEST(Reports, SearchResultRoundTrip) {
  unitdist::SearchConfig cfg;
  cfg.tGrid = {20.0, 35.5};
  cfg.Tmax = 47;
  const auto result = unitdist::optimize(cfg);
  const auto j = unitdist::to_json(result);
  const auto again = unitdist::search_result_from_json(json::parse(j.dump()));
  EXPECT_EQ(unitdist::to_json(again).dump(), j.dump());
  EXPECT_EQ(again.best, result.best);
}

TEST(Reports, UpperBoundRoundTrip) {
  const auto r = unitdist::upper_bound_at(4.116);
  const auto j = unitdist::to_json(r);
  EXPECT_EQ(j["kStar"].size(), 7u);
  EXPECT_EQ(j["kStar"]["2"], 5);
  const auto again = unitdist::upper_bound_report_from_json(json::parse(j.dump()));
  EXPECT_EQ(unitdist::to_json(again).dump(), j.dump());
}

TEST(Rationals, ParseExactly) {
  EXPECT_EQ(unitdist::parse_rational("3/4"), BigRational(3, 4));
  EXPECT_EQ(unitdist::parse_rational("-6/8"), BigRational(-3, 4));
  EXPECT_EQ(unitdist::parse_rational("3/-4"), BigRational(-3, 4));
  EXPECT_EQ(unitdist::parse_rational("17"), BigRational(17));
  EXPECT_EQ(unitdist::parse_rational("123456789012345678901234567890"),
            BigRational(unitdist::BigInt("123456789012345678901234567890")));
  for (const char* bad : {"", "x", "1/0", "1.5", "1/2/3", "/3"}) {
    EXPECT_THROW(unitdist::parse_rational(bad), DocumentError) << bad;
  }
}

TEST(Rationals, ParseAlpha) {
  EXPECT_EQ(unitdist::parse_alpha(4, "5"), unitdist::RealQuadElement(1, BigRational(5)));
  EXPECT_EQ(unitdist::parse_alpha(8, "2,1"), unitdist::RealQuadElement(2, BigRational(2), BigRational(1)));
  EXPECT_EQ(unitdist::parse_alpha(12, "1/2,-1/3"),
            unitdist::RealQuadElement(3, BigRational(1, 2), BigRational(-1, 3)));
  EXPECT_EQ(unitdist::parse_alpha(4, "5,0"), unitdist::RealQuadElement(1, BigRational(5)));
  EXPECT_THROW(unitdist::parse_alpha(4, "5,1"), DocumentError);
}

TEST(PointCsv, HeaderAndSeventeenDigits) {
  const unitdist::ScaledLattice lat(4, unitdist::RealQuadElement(1, BigRational(5)));
  const auto ps = unitdist::build_point_set(lat, 2.0, {0.3, 0.6});
  std::ostringstream os;
  unitdist::write_point_csv(os, ps);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    ASSERT_NE(comma, std::string::npos);
    const double x = std::stod(line.substr(0, comma));
    const double y = std::stod(line.substr(comma + 1));
    EXPECT_EQ(x, ps.projected[rows].first);
    EXPECT_EQ(y, ps.projected[rows].second);
    ++rows;
  }
  EXPECT_EQ(rows, ps.projected.size());
}

TEST(PointCsv, ConstructionRecordRoundTrip) {
  const unitdist::ScaledLattice lat(8, unitdist::RealQuadElement(2, BigRational(2), BigRational(1)));
  unitdist::ConstructionRecord rec;
  rec.n = 8;
  rec.alpha = lat.alpha();
  rec.R = 3.0;
  rec.shift = unitdist::choose_shift(lat, 3.0, 8, 5);
  const auto ps = unitdist::build_point_set(lat, 3.0, rec.shift.w);
  rec.count = unitdist::count_unit_distances(ps, lat);
  rec.boundaryFlagged = ps.boundaryFlagged;
  rec.ratioGuarantee = unitdist::ratio_guarantee_holds(rec.count, 3.0, 2);
  const auto j = unitdist::to_json(rec);
  const auto again = unitdist::construction_record_from_json(json::parse(j.dump()));
  EXPECT_EQ(unitdist::to_json(again).dump(), j.dump());
  EXPECT_EQ(j["alpha"]["m"], 2);
  EXPECT_EQ(j["alpha"]["x"], "2");
  EXPECT_EQ(j["alpha"]["y"], "1");
}

}  // namespace

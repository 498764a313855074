// Apache License, Version 2.0, refer to LICENSE.txt

#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "simplex_priors/errors.hpp"
#include "simplex_priors/posterior.hpp"
#include "simplex_priors/toolkit.hpp"

using namespace spx;
using namespace spx::toolkit;
using Json = nlohmann::ordered_json;

namespace {

std::string fixture(const std::string& name) { return std::string(SPX_FIXTURE_DIR) + "/" + name; }

std::size_t error_row(const std::string& name, DatasetKind kind, std::string* message = nullptr) {
  try {
    ingest(fixture(name), kind);
  } catch (const DataError& e) {
    if (message) *message = e.what();
    return e.row();
  }
  ADD_FAILURE() << name << " was accepted";
  return 0;
}

Dataset from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_frequencies(in, "inline");
}

Dataset dirichlet_dataset(std::vector<double> alpha, std::uint64_t count, std::uint64_t seed) {
  const auto r = rejection_sample(SelectionModel(DirichletParams(std::move(alpha)), 0.0), count, seed);
  std::vector<SimplexPoint> points;
  for (std::size_t k = 0; k < r.draws.size(); ++k) {
    const auto row = r.draws.row(k);
    points.emplace_back(std::vector<double>(row.begin(), row.end()));
  }
  Dataset d;
  d.kind = DatasetKind::frequencies;
  d.m = points.front().dimension();
  d.frequencies = FrequencySample(std::move(points));
  return d;
}

}  // namespace

TEST(Ingest, FrequenciesWithAndWithoutHeader) {
  const auto with = ingest(fixture("frequencies_m3.csv"), DatasetKind::frequencies);
  EXPECT_EQ(with.kind, DatasetKind::frequencies);
  EXPECT_EQ(with.m, 3u);
  ASSERT_TRUE(with.frequencies.has_value());
  EXPECT_EQ(with.frequencies->size(), 22u);
  EXPECT_FALSE(with.counts.has_value());

  const auto without = ingest(fixture("frequencies_noheader.csv"), DatasetKind::frequencies);
  EXPECT_EQ(without.frequencies->size(), 5u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(without.frequencies->points()[0][i], with.frequencies->points()[0][i]);
  }
}

TEST(Ingest, BlankLinesAndWhitespaceAreTolerated) {
  const auto d = from_text("p1, p2\n\n 0.25 , 0.75\n0.5,0.5\n\n");
  EXPECT_EQ(d.frequencies->size(), 2u);
  EXPECT_EQ(d.frequencies->points()[0][0], 0.25);
}

TEST(Ingest, MalformedRowsNameTheirRow) {
  std::string message;
  EXPECT_EQ(error_row("bad_sum.csv", DatasetKind::frequencies, &message), 3u);
  EXPECT_NE(message.find("row 3"), std::string::npos) << message;
  EXPECT_NE(message.find("sum to 1.1,"), std::string::npos) << message;
  EXPECT_EQ(error_row("ragged.csv", DatasetKind::frequencies, &message), 2u);
  EXPECT_NE(message.find("expected 3 fields, got 2"), std::string::npos) << message;
  EXPECT_EQ(error_row("not_a_number.csv", DatasetKind::frequencies, &message), 3u);
  EXPECT_NE(message.find("abc"), std::string::npos) << message;
  EXPECT_EQ(error_row("negative.csv", DatasetKind::frequencies), 2u);
  EXPECT_EQ(error_row("bad_counts.txt", DatasetKind::counts, &message), 1u);
  EXPECT_NE(message.find("1.5"), std::string::npos) << message;
  EXPECT_THROW(ingest(fixture("does_not_exist.csv"), DatasetKind::frequencies), DataError);
  EXPECT_THROW(from_text("p1,p2\n"), DataError);
}

TEST(Ingest, SumToleranceBoundary) {
  EXPECT_NO_THROW(from_text("0.5,0.5000000005\n"));
  EXPECT_THROW(from_text("0.5,0.500000002\n"), DataError);
}

TEST(Ingest, Counts) {
  const auto d = ingest(fixture("counts_3_1.txt"), DatasetKind::counts);
  ASSERT_TRUE(d.counts.has_value());
  EXPECT_EQ(d.counts->values()[0], 3);
  EXPECT_EQ(d.counts->values()[1], 1);
  EXPECT_EQ(d.counts->total(), 4);
  std::istringstream two_lines("1,2\n3,4\n");
  EXPECT_THROW(parse_counts(two_lines, "inline"), DataError);
  std::istringstream negative("1,-2\n");
  EXPECT_THROW(parse_counts(negative, "inline"), DataError);
}

TEST(Grid, Points) {
  const auto pts = Grid{-1.0, 5.0, 0.1}.points();
  ASSERT_EQ(pts.size(), 61u);
  EXPECT_EQ(pts.front(), -1.0);
  EXPECT_EQ(pts.back(), 5.0);
  EXPECT_EQ(pts[10], 0.0);
  EXPECT_THROW((Grid{-2.0, 1.0, 0.1}.points()), DomainError);
  EXPECT_THROW((Grid{0.0, 1.0, 0.0}.points()), DomainError);
  EXPECT_THROW((Grid{1.0, 0.0, 0.1}.points()), DomainError);
}

TEST(CmdFit, DirichletRoundTripOnTableParameters) {
  const std::vector<double> truth{6.6725, 3.7305, 20.1206};
  const auto report = cmd_fit(dirichlet_dataset(truth, 2000, 77), Options{});
  ASSERT_EQ(report.alpha.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(report.alpha[i], truth[i], 0.15 * truth[i]);
  EXPECT_EQ(report.n_observations, 2000u);
  EXPECT_FALSE(report.degenerate);
  const auto j = Json::parse(render(report));
  EXPECT_EQ(j["schema"], "simplex-priors/1");
  EXPECT_EQ(j["model_kind"], "dirichlet");
  EXPECT_TRUE(j["diagnostics"].contains("gradient_norm"));
  EXPECT_FALSE(j.contains("sigma"));
}

TEST(CmdFit, SelectionBoundaries) {
  Options o;
  o.model = ModelKind::selection;
  o.alpha = std::vector<double>{1, 1};
  const auto low = cmd_fit(ingest(fixture("h_half.csv"), DatasetKind::frequencies), o);
  ASSERT_TRUE(low.sigma.has_value());
  EXPECT_EQ(low.sigma->kind, SigmaKind::lower_boundary);

  const auto high = cmd_fit(ingest(fixture("near_vertex.csv"), DatasetKind::frequencies), o);
  ASSERT_TRUE(high.sigma.has_value());
  EXPECT_EQ(high.sigma->kind, SigmaKind::plus_infinity);
  EXPECT_TRUE(std::isfinite(high.log_likelihood));
  const auto j = Json::parse(render(high));
  EXPECT_EQ(j["sigma"]["kind"], "plus_infinity");
  EXPECT_FALSE(j["sigma"].contains("value"));
  EXPECT_EQ(j["diagnostics"]["log_likelihood_is_limit"], 1.0);

  const auto root = cmd_fit(ingest(fixture("h_half_ninety.csv"), DatasetKind::frequencies), o);
  ASSERT_EQ(root.sigma->kind, SigmaKind::interior);
  EXPECT_NEAR(root.sigma->value, 2.0, 1e-8);
}

TEST(CmdFit, SelectionJointAndMixture) {
  const auto data = ingest(fixture("frequencies_m3.csv"), DatasetKind::frequencies);
  Options o;
  o.model = ModelKind::selection;
  const auto joint = cmd_fit(data, o);
  ASSERT_TRUE(joint.sigma.has_value());
  const auto dir = cmd_fit(data, Options{});
  EXPECT_GE(joint.log_likelihood, dir.log_likelihood - 1e-9);

  o.sigma = 0.0;
  const auto fixed = cmd_fit(data, o);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(fixed.alpha[i], dir.alpha[i]);

  Options mix;
  mix.model = ModelKind::mixture;
  mix.r = std::vector<int>{1, 0, 2};
  const auto mixture = cmd_fit(data, mix);
  EXPECT_TRUE(std::isfinite(mixture.log_likelihood));
  EXPECT_EQ(Json::parse(render(mixture))["r"], Json::parse("[1,0,2]"));
  mix.r.reset();
  EXPECT_THROW(cmd_fit(data, mix), DomainError);
}

TEST(CmdPosterior, Examples) {
  Options o;
  o.alpha = std::vector<double>{1, 1};
  auto j = Json::parse(cmd_posterior(CountVector({3, 1}), o));
  EXPECT_NEAR(j["mean"][0].get<double>(), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(j["mean"][1].get<double>(), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(j["posterior_alpha"], Json::parse("[4.0,2.0]"));

  o.model = ModelKind::selection;
  o.sigma = -1.0;
  j = Json::parse(cmd_posterior(CountVector({1, 0}), o));
  EXPECT_NEAR(j["mean"][0].get<double>(), 0.6, 1e-12);
  EXPECT_NEAR(j["mean"][1].get<double>(), 0.4, 1e-12);
  EXPECT_NEAR(j["covariance"][0][0].get<double>(), 0.04, 1e-12);
  EXPECT_NEAR(j["covariance"][0][1].get<double>(), -0.04, 1e-12);

  o.alpha = std::vector<double>{2, 3, 5};
  o.sigma = 1.5;
  j = Json::parse(cmd_posterior(CountVector({0, 0, 0}), o));
  const auto prior = posterior_mean(WeightedDirichletModel::selection(DirichletParams({2, 3, 5}), 1.5),
                                    CountVector({0, 0, 0}));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(j["mean"][i].get<double>(), prior[i]);
  // ln E[1 + 1.5 H] with E[H] = (6 + 12 + 30) / 110.
  EXPECT_NEAR(j["log_normalizer"].get<double>(), std::log1p(1.5 * 48.0 / 110.0), 1e-14);

  o.sigma = std::numeric_limits<double>::infinity();
  EXPECT_THROW(cmd_posterior(CountVector({0, 0, 0}), o), DomainError);
}

TEST(CmdEb, Examples) {
  Options o;
  auto j = Json::parse(cmd_eb(CountVector({0, 5}), o));
  EXPECT_EQ(j["theta"]["kind"], "zero_boundary");
  EXPECT_EQ(j["estimate"], Json::parse("[0.0,1.0]"));
  EXPECT_TRUE(j["degenerate"].get<bool>());

  j = Json::parse(cmd_eb(CountVector({5, 5}), o));
  EXPECT_EQ(j["theta"]["kind"], "interior");
  EXPECT_NEAR(j["estimate"][0].get<double>() + j["estimate"][1].get<double>(), 1.0, 1e-12);

  o.sigma = -1.0;
  j = Json::parse(cmd_eb(CountVector({3, 1}), o));
  ASSERT_EQ(j["theta"]["kind"], "interior");
  const double theta = j["theta"]["value"].get<double>();
  const auto direct =
      posterior_mean(WeightedDirichletModel::selection(DirichletParams({theta, 1.0}), -1.0), CountVector({3, 1}));
  EXPECT_NEAR(j["estimate"][0].get<double>(), direct[0], 1e-10);

  EXPECT_THROW(cmd_eb(CountVector({1, 2, 3}), Options{}), DomainError);
  Options full;
  full.full_alpha = true;
  j = Json::parse(cmd_eb(CountVector({4, 2, 3}), full));
  EXPECT_EQ(j["estimate"].size(), 3u);
}

TEST(CmdSample, DeterministicAndReadable) {
  Options o;
  o.model = ModelKind::selection;
  o.alpha = std::vector<double>{2, 3, 4};
  o.sigma = 0.0;
  o.seed = 42;
  o.iterations = 2000;
  const auto a = cmd_sample(o);
  const auto b = cmd_sample(o);
  const auto text = render_draws(a.draws);
  EXPECT_EQ(text, render_draws(b.draws));
  EXPECT_EQ(a.summary_json, b.summary_json);
  EXPECT_EQ(text.substr(0, text.find('\n')), "p1,p2,p3");

  // Draws file read back as a frequency dataset keeps m and every row.
  std::istringstream in(text);
  const auto back = parse_frequencies(in, "draws");
  EXPECT_EQ(back.m, 3u);
  EXPECT_EQ(back.frequencies->size(), a.draws.size());
  // Rows are renormalized on ingest, which may move the last bit.
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back.frequencies->points()[7][i], a.draws.row(7)[i], 1e-15);

  o.method = SampleMethod::rejection;
  const auto r = Json::parse(cmd_sample(o).summary_json);
  EXPECT_EQ(r["acceptance_rate"].get<double>(), 1.0);

  o.model = ModelKind::mixture;
  EXPECT_THROW(cmd_sample(o), DomainError);
}

TEST(CmdSample, GibbsAgreesWithRejection) {
  Options o;
  o.model = ModelKind::selection;
  o.alpha = std::vector<double>{2, 2};
  o.sigma = -1.0;
  o.seed = 5;
  o.iterations = 40000;
  const auto g = Json::parse(cmd_sample(o).summary_json)["summary"];
  o.method = SampleMethod::rejection;
  const auto r = Json::parse(cmd_sample(o).summary_json)["summary"];
  for (std::size_t i = 0; i < 2; ++i) {
    const double se = std::hypot(g["mc_standard_error"][i].get<double>(), r["mc_standard_error"][i].get<double>());
    EXPECT_LT(std::abs(g["mean"][i].get<double>() - r["mean"][i].get<double>()), 4 * se);
  }
}

TEST(CmdCurve, Examples) {
  Options o;
  o.alpha = std::vector<double>{1, 1};
  const auto half = cmd_curve(ingest(fixture("h_half.csv"), DatasetKind::frequencies), o);
  ASSERT_EQ(half.size(), 62u);
  for (std::size_t k = 1; k + 1 < half.size(); ++k) {
    EXPECT_LT(half[k].log_likelihood, half[k - 1].log_likelihood) << half[k].sigma;
  }
  EXPECT_EQ(half[10].sigma, 0.0);
  EXPECT_NEAR(half[10].log_likelihood, 0.0, 1e-15);
  EXPECT_TRUE(std::isinf(half.back().sigma));

  const auto root = cmd_curve(ingest(fixture("h_half_ninety.csv"), DatasetKind::frequencies), o);
  int changes = 0;
  double where = 0.0;
  for (std::size_t k = 1; k + 1 < root.size(); ++k) {
    if ((root[k - 1].score > 0) != (root[k].score > 0)) {
      ++changes;
      where = root[k].sigma;
    }
  }
  EXPECT_EQ(changes, 1);
  EXPECT_GE(where, 1.9);
  EXPECT_LE(where, 2.1);

  const auto csv = render_curve(half);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "sigma,log_likelihood,score");
  EXPECT_NE(csv.find("\ninf,"), std::string::npos);
}

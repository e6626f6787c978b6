#include "wavemap/error.hpp"
#include "wavemap/hyp_infty.hpp"
#include "wavemap/serialize.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>

using namespace wavemap;
using nlohmann::json;

namespace {

const Profile& f1() {
  static const Profile p = shoot_profile(1, 1, 1e-12);
  return p;
}

}  // namespace

TEST(Serialize, ProfileRoundTrip) {
  const std::string text = profile_to_json(f1());
  const json j = json::parse(text);
  EXPECT_EQ(j["schema_version"], schema_version);
  EXPECT_EQ(j["kind"], "profile");
  EXPECT_EQ(j["mesh"].size(), j["f"].size());
  const auto back = profile_from_json(text);
  EXPECT_EQ(back.n(), 1);
  EXPECT_EQ(back.b(), f1().b());
  EXPECT_EQ(back.c(), f1().c());
  for (double r : {0.0, 0.01, 0.3, 0.7, 0.99, 1.0}) EXPECT_NEAR(back.evaluate(r), f1().evaluate(r), 1e-10);
}

TEST(Serialize, ClosedFormRoundTrip) {
  const auto back = profile_from_json(profile_to_json(profile_closed_form_f0()));
  EXPECT_TRUE(back.is_closed_form());
  EXPECT_NEAR(back.evaluate(0.5), 2 * std::atan(0.5), 1e-15);
}

TEST(Serialize, ProfileRejections) {
  json j = json::parse(profile_to_json(f1()));
  json bad = j;
  bad["schema_version"] = schema_version + 1;
  EXPECT_THROW(profile_from_json(bad.dump()), IoError);
  bad = j;
  bad.erase("b");
  EXPECT_THROW(profile_from_json(bad.dump()), IoError);
  bad = j;
  bad["kind"] = "trajectory";
  EXPECT_THROW(profile_from_json(bad.dump()), IoError);
  bad = j;
  for (auto& v : bad["f"]) v = M_PI / 2;
  EXPECT_THROW(profile_from_json(bad.dump()), IoError);
  bad = j;
  bad["f"][bad["f"].size() / 2] = bad["f"][bad["f"].size() / 2].get<double>() + 1e-4;
  EXPECT_THROW(profile_from_json(bad.dump()), IoError);
  EXPECT_THROW(profile_from_json("{not json"), IoError);
  EXPECT_THROW(profile_from_json("[1, 2]"), IoError);
}

TEST(Serialize, EigenvalueCsvRoundTripsInfinity) {
  auto recs = infty_eigenvalues(2).records;
  EigenvalueRecord r;
  r.n = 2;
  r.ell = 1;
  r.j = 1;
  r.mu = 5.304;
  r.lambda = -r.mu * r.mu;
  r.wronskian_residual = 1e-14;
  recs.push_back(r);
  const auto csv = eigenvalues_to_csv(recs);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,ell,j,lambda,mu,residual");
  EXPECT_NE(csv.find("\ninf,1,1,"), std::string::npos);
  const auto back = eigenvalues_from_csv(csv);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].n, recs[i].n);
    EXPECT_EQ(back[i].j, recs[i].j);
    EXPECT_EQ(back[i].lambda, recs[i].lambda);
    EXPECT_EQ(back[i].mu, recs[i].mu);
    EXPECT_EQ(back[i].wronskian_residual, recs[i].wronskian_residual);
  }
  const json j = json::parse(eigenvalues_to_json(recs));
  EXPECT_EQ(j["records"][0]["n"], "inf");
  EXPECT_EQ(j["records"][2]["n"], 2);
}

TEST(Serialize, EigenvalueCsvRejections) {
  EXPECT_THROW(eigenvalues_from_csv("a,b\n"), IoError);
  EXPECT_THROW(eigenvalues_from_csv("n,ell,j,lambda,mu,residual\n1,1,1\n"), IoError);
  EXPECT_THROW(eigenvalues_from_csv("n,ell,j,lambda,mu,residual\nx,1,1,1,1,1\n"), IoError);
}

TEST(Serialize, Trajectory) {
  std::vector<EvolutionState> traj(5);
  for (int i = 0; i < 5; ++i) {
    traj[i].sigma = 0.5 * i;
    traj[i].h_norm = std::exp(2.0 * traj[i].sigma);
    traj[i].energy = 1.0;
    traj[i].grid = {0.0, 0.5};
    traj[i].u = {0.0, 1.0};
    traj[i].v = {0.0, 2.0};
  }
  const auto csv = trajectory_to_csv(traj);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "sigma,h_norm,energy,rate");
  EXPECT_NE(csv.find(",nan\n"), std::string::npos);
  const double snaps[] = {0.9};
  const json j = json::parse(trajectory_to_json(traj, snaps));
  EXPECT_EQ(j["kind"], "trajectory");
  EXPECT_TRUE(j["summary"][0]["rate"].is_null());
  EXPECT_NEAR(j["summary"][4]["rate"].get<double>(), 2.0, 1e-12);
  ASSERT_EQ(j["snapshots"].size(), 1u);
  EXPECT_EQ(j["snapshots"][0]["sigma"], 1.0);
}

TEST(Serialize, Files) {
  const auto path = (std::filesystem::temp_directory_path() / "wavemap_serialize_test.txt").string();
  write_text_file(path, "hello\n");
  EXPECT_EQ(read_text_file(path), "hello\n");
  std::filesystem::remove(path);
  EXPECT_THROW(read_text_file(path), IoError);
  EXPECT_THROW(write_text_file("/nonexistent-dir/x/y.txt", "a"), IoError);
}

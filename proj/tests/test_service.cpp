#include <gtest/gtest.h>

#include <chrono>
#include <thread>

#include "oracles.hpp"
#include "wlayout/service.hpp"

using namespace wlayout;

namespace {

const char* kTinySpace = R"({
  "width": 5, "height": 5, "aisle_width": 1,
  "walls": [[0,0],[0,1],[0,3],[0,4],[4,0],[4,1],[4,2],[4,3],[4,4],[1,0],[2,0],[3,0],[1,4],[2,4],[3,4]],
  "door_connections": [[0,2]],
  "sweep": {"beam_size": 2, "grid": [[0.5, 0.1], [0.9, 0.3], [0.2, 0.1]]}
})";

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    service_ = std::make_unique<Service>(ServiceOptions{2, std::nullopt});
    service_->mount(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
    service_.reset();
  }

  std::string post_space(const std::string& body) {
    auto res = client_->Post("/spaces", body, "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    return Json::parse(res->body).at("id").get<std::string>();
  }

  std::string post_job(const Json& body) {
    auto res = client_->Post("/jobs", body.dump(), "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 202) << res->body;
    return Json::parse(res->body).at("id").get<std::string>();
  }

  Json wait_for(const std::string& job) {
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(60);
    for (;;) {
      auto res = client_->Get("/jobs/" + job);
      EXPECT_TRUE(res);
      Json j = Json::parse(res->body);
      const std::string state = j.at("state");
      if (state == "done" || state == "failed") return j;
      if (std::chrono::steady_clock::now() > deadline) {
        ADD_FAILURE() << "job did not finish";
        return j;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
  }

  std::unique_ptr<Service> service_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::unique_ptr<httplib::Client> client_;
};

}  // namespace

TEST_F(ServiceTest, SpaceRoundTrip) {
  const std::string id = post_space(kTinySpace);
  auto res = client_->Get("/spaces/" + id);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const SpaceFile stored = parse_space_file(res->body);
  const SpaceFile original = parse_space_file(kTinySpace);
  EXPECT_EQ(space_file_to_json(stored), space_file_to_json(original));
}

TEST_F(ServiceTest, BadSpace) {
  auto res = client_->Post("/spaces", R"({"width": 0, "height": 3, "aisle_width": 1})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(Json::parse(res->body).at("error"), "InvariantViolation");
}

TEST_F(ServiceTest, UnknownIds) {
  EXPECT_EQ(client_->Get("/spaces/nope")->status, 404);
  EXPECT_EQ(client_->Get("/jobs/nope")->status, 404);
  EXPECT_EQ(client_->Get("/jobs/nope/result")->status, 404);
  EXPECT_EQ(client_->Delete("/jobs/nope")->status, 404);
  EXPECT_EQ(client_->Get("/layouts/nope")->status, 404);
  auto res = client_->Post("/jobs", R"({"space_id": "nope", "kind": "sweep"})", "application/json");
  EXPECT_EQ(res->status, 404);
}

TEST_F(ServiceTest, SweepMatchesLibrary) {
  const std::string space = post_space(kTinySpace);
  const std::string job = post_job({{"space_id", space}, {"kind", "sweep"}});
  const Json status = wait_for(job);
  ASSERT_EQ(status.at("state"), "done") << status.dump();
  EXPECT_EQ(status.at("progress").at("completed"), 3);
  EXPECT_EQ(status.at("layouts").size(), 3u);

  auto res = client_->Get("/jobs/" + job + "/result");
  ASSERT_EQ(res->status, 200);
  const SpaceFile file = parse_space_file(kTinySpace);
  SearchConfig config;
  config.beam_size = 2;
  SweepOptions options;
  options.grid = *file.sweep.grid;
  const ParetoSet direct = pareto_sweep(file.space, config, options);
  EXPECT_EQ(Json::parse(res->body), pareto_to_json(direct));

  auto layout = client_->Get("/layouts/" + status.at("layouts")[0].get<std::string>());
  ASSERT_EQ(layout->status, 200);
  EXPECT_EQ(Json::parse(layout->body).at("grid"), Json(grid_rows(direct.candidates[0].optimal)));
}

TEST_F(ServiceTest, SolveJob) {
  const std::string space = post_space(kTinySpace);
  const std::string job =
      post_job({{"space_id", space}, {"kind", "solve"}, {"params", {{"alpha", 0.5}, {"theta", 0.1}}}});
  ASSERT_EQ(wait_for(job).at("state"), "done");
  auto res = client_->Get("/jobs/" + job + "/result");
  ASSERT_EQ(res->status, 200);
  const SpaceFile file = parse_space_file(kTinySpace);
  SearchConfig config;
  config.beam_size = 2;
  const SearchResult direct = generate(file.space, ScoringParams(0.5, 0.1), config);
  EXPECT_EQ(Json::parse(res->body).at("grid"), Json(grid_rows(direct.optimal)));
}

TEST_F(ServiceTest, BadJobs) {
  const std::string space = post_space(kTinySpace);
  auto post = [&](const Json& body) { return client_->Post("/jobs", body.dump(), "application/json")->status; };
  EXPECT_EQ(post({{"space_id", space}, {"kind", "dance"}}), 400);
  EXPECT_EQ(post({{"space_id", space}, {"kind", "solve"}}), 400);
  EXPECT_EQ(post({{"space_id", space}, {"kind", "sweep"}, {"config", {{"beam_size", 0}}}}), 400);
}

TEST_F(ServiceTest, ResultBeforeDoneAndCancel) {
  // A larger open room keeps the runner busy long enough to observe it.
  std::vector<std::string> rows(30, std::string(30, 'S'));
  rows[0][15] = 'D';
  const SpacePtr big = oracle::space_from_picture(rows, 1);
  const std::string space = post_space(space_to_json(*big).dump());
  const std::string first = post_job({{"space_id", space}, {"kind", "sweep"}, {"config", {{"beam_size", 8}}}});
  const std::string second = post_job({{"space_id", space}, {"kind", "sweep"}});

  EXPECT_EQ(client_->Get("/jobs/" + second + "/result")->status, 409);
  EXPECT_EQ(client_->Delete("/jobs/" + second)->status, 202);
  EXPECT_EQ(client_->Delete("/jobs/" + first)->status, 202);
  const Json a = wait_for(first);
  const Json b = wait_for(second);
  EXPECT_EQ(a.at("state"), "failed");
  EXPECT_EQ(a.at("reason"), "cancelled");
  EXPECT_EQ(b.at("state"), "failed");
  EXPECT_EQ(client_->Delete("/jobs/" + first)->status, 409);
}

TEST_F(ServiceTest, ImportLayout) {
  const std::string space = post_space(kTinySpace);
  const std::string job = post_job({{"space_id", space}, {"kind", "sweep"}});
  ASSERT_EQ(wait_for(job).at("state"), "done");

  const std::string manual = "WWDWW\nW...W\nWSSSW\nWSSSW\nWWWWW\n";
  auto res = client_->Post("/spaces/" + space + "/import-layout?job=" + job, manual, "text/plain");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  const Json j = Json::parse(res->body);
  EXPECT_EQ(j.at("n_s"), 6);
  EXPECT_EQ(j.at("n_pf"), 3);
  EXPECT_TRUE(j.at("comparison").contains("status"));

  auto wrong = client_->Post("/spaces/" + space + "/import-layout", "WWDWW\nW...W\n", "text/plain");
  EXPECT_EQ(wrong->status, 400);
  EXPECT_EQ(Json::parse(wrong->body).at("error"), "DimensionMismatch");
}

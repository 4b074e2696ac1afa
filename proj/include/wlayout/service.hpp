#pragma once

// HTTP facade over the engine: spaces, background solve/sweep jobs with
// progress polling, layout retrieval and manual-layout import.
//
// Jobs run one at a time on a dedicated runner thread; a sweep job fans out
// over `workers` threads. Everything lives in memory; with a data directory
// finished results are also written to disk.

#include <chrono>
#include <condition_variable>
#include <ctime>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "wlayout/io.hpp"
#include "wlayout/refine.hpp"
#include "wlayout/search.hpp"

namespace wlayout {

enum class JobState { Queued, Running, Done, Failed };

constexpr const char* to_string(JobState s) {
  switch (s) {
    case JobState::Queued: return "queued";
    case JobState::Running: return "running";
    case JobState::Done: return "done";
    case JobState::Failed: return "failed";
  }
  return "?";
}

struct ServiceOptions {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::filesystem::path> data_dir;
};

class Service {
 public:
  explicit Service(ServiceOptions options = {})
      : options_(std::move(options)), runner_([this](std::stop_token st) { run_jobs(st); }) {
    if (options_.data_dir) std::filesystem::create_directories(*options_.data_dir);
  }

  ~Service() {
    {
      std::lock_guard lock(mutex_);
      for (auto& [id, job] : jobs_) job->stop.request_stop();
      runner_.request_stop();
    }
    wake_.notify_all();
  }

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  void mount(httplib::Server& server) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Post("/spaces", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { create_space(req, res); });
    });
    server.Get(R"(/spaces/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        std::lock_guard lock(mutex_);
        auto it = spaces_.find(req.matches[1]);
        if (it == spaces_.end()) return not_found(res, "space");
        res.set_content(it->second.text, "application/json");
      });
    });
    server.Post(R"(/spaces/([^/]+)/import-layout)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] { import_layout_endpoint(req, res); });
                });
    server.Post("/jobs", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { create_job(req, res); });
    });
    server.Get(R"(/jobs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto job = find_job(req.matches[1]);
        if (!job) return not_found(res, "job");
        res.set_content(job_json(*job).dump(), "application/json");
      });
    });
    server.Get(R"(/jobs/([^/]+)/result)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto job = find_job(req.matches[1]);
        if (!job) return not_found(res, "job");
        std::lock_guard lock(mutex_);
        if (job->state != JobState::Done) {
          return error(res, 409, "NotFinished", "job is " + std::string(to_string(job->state)));
        }
        res.set_content(job->result, "application/json");
      });
    });
    server.Delete(R"(/jobs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { cancel_job(req, res); });
    });
    server.Get(R"(/layouts/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        std::lock_guard lock(mutex_);
        auto it = layouts_.find(req.matches[1]);
        if (it == layouts_.end()) return not_found(res, "layout");
        res.set_content(it->second, "application/json");
      });
    });
  }

 private:
  struct StoredSpace {
    SpaceFile file;
    std::string text;
  };

  struct Job {
    std::string id;
    std::string kind;
    std::string space_id;
    JobState state = JobState::Queued;
    std::size_t completed = 0;
    std::size_t total = 0;
    std::string created_at;
    std::string result;
    std::string failure;
    std::vector<std::string> layout_ids;

    SpacePtr space;
    std::optional<ScoringParams> params;
    SearchConfig config;
    std::vector<Refiner> refiners;
    std::vector<SweepPoint> grid;
    std::stop_source stop;
  };

  static std::string now_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  static void error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
    res.status = status;
    res.set_content(Json{{"error", code}, {"message", message}}.dump(), "application/json");
  }

  static void not_found(httplib::Response& res, const char* what) {
    error(res, 404, "NotFound", std::string("unknown ") + what + " id");
  }

  template <class F>
  static void guarded(httplib::Response& res, F&& body) {
    try {
      body();
    } catch (const Error& e) {
      error(res, e.code() == ErrorCode::Cancelled ? 409 : 400, std::string(to_string(e.code())), e.what());
    } catch (const Json::exception& e) {
      error(res, 400, "ParseError", e.what());
    } catch (const std::exception& e) {
      error(res, 500, "Internal", e.what());
    }
  }

  std::shared_ptr<Job> find_job(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(id);
    return it == jobs_.end() ? nullptr : it->second;
  }

  Json job_json(const Job& job) {
    std::lock_guard lock(mutex_);
    Json j{{"id", job.id},
           {"kind", job.kind},
           {"space_id", job.space_id},
           {"state", to_string(job.state)},
           {"progress", {{"completed", job.completed}, {"total", job.total}}},
           {"created_at", job.created_at},
           {"result", job.state == JobState::Done ? Json("/jobs/" + job.id + "/result") : Json()},
           {"layouts", job.layout_ids}};
    if (job.state == JobState::Failed) j["reason"] = job.failure;
    return j;
  }

  void create_space(const httplib::Request& req, httplib::Response& res) {
    SpaceFile file = parse_space_file(req.body);
    std::string text = space_file_to_json(file).dump(2) + "\n";
    std::string id;
    {
      std::lock_guard lock(mutex_);
      id = "s" + std::to_string(++space_counter_);
      spaces_.emplace(id, StoredSpace{std::move(file), std::move(text)});
    }
    res.status = 201;
    res.set_content(Json{{"id", id}}.dump(), "application/json");
  }

  void create_job(const httplib::Request& req, httplib::Response& res) {
    const Json body = detail::parse_json(req.body);
    auto job = std::make_shared<Job>();
    job->space_id = detail::required<std::string>(body, "space_id");
    job->kind = detail::required<std::string>(body, "kind");
    if (job->kind != "solve" && job->kind != "sweep") {
      return error(res, 400, "ParseError", "kind must be 'solve' or 'sweep'");
    }
    SpaceFile space;
    {
      std::lock_guard lock(mutex_);
      auto it = spaces_.find(job->space_id);
      if (it == spaces_.end()) return not_found(res, "space");
      space = it->second.file;
    }
    job->space = space.space;
    if (space.sweep.beam_size) job->config.beam_size = *space.sweep.beam_size;
    job->config.max_depth = space.sweep.max_depth;
    job->grid = space.sweep.grid ? *space.sweep.grid : sweep_grid();
    job->refiners = space.refiners;
    if (body.contains("config") && body.at("config").is_object()) {
      const Json& c = body.at("config");
      if (c.contains("beam_size")) job->config.beam_size = c.at("beam_size").get<std::size_t>();
      if (c.contains("max_depth") && !c.at("max_depth").is_null()) job->config.max_depth = c.at("max_depth").get<int>();
    }
    if (job->config.beam_size < 1) return error(res, 400, "InvariantViolation", "beam_size must be >= 1");
    if (body.contains("refiners")) job->refiners = refiners_from_json(body.at("refiners"), *job->space);
    if (job->kind == "solve") {
      if (!body.contains("params")) return error(res, 400, "ParseError", "solve jobs need params");
      const Json& p = body.at("params");
      job->params.emplace(detail::required<double>(p, "alpha"), detail::required<double>(p, "theta"));
      job->total = 1;
    } else {
      job->total = job->grid.size();
    }
    job->created_at = now_utc();
    {
      std::lock_guard lock(mutex_);
      job->id = "j" + std::to_string(++job_counter_);
      jobs_.emplace(job->id, job);
      queue_.push_back(job);
    }
    wake_.notify_all();
    res.status = 202;
    res.set_content(Json{{"id", job->id}}.dump(), "application/json");
  }

  void cancel_job(const httplib::Request& req, httplib::Response& res) {
    auto job = find_job(req.matches[1]);
    if (!job) return not_found(res, "job");
    {
      std::lock_guard lock(mutex_);
      if (job->state == JobState::Done || job->state == JobState::Failed) {
        return error(res, 409, "Conflict", "job already finished");
      }
      job->stop.request_stop();
      if (job->state == JobState::Queued) {
        job->state = JobState::Failed;
        job->failure = "cancelled";
      }
    }
    res.status = 202;
    res.set_content(job_json(*job).dump(), "application/json");
  }

  void import_layout_endpoint(const httplib::Request& req, httplib::Response& res) {
    SpacePtr space;
    {
      std::lock_guard lock(mutex_);
      auto it = spaces_.find(req.matches[1]);
      if (it == spaces_.end()) return not_found(res, "space");
      space = it->second.file.space;
    }
    auto param = [&](const char* name, double fallback) {
      return req.has_param(name) ? std::stod(req.get_param_value(name)) : fallback;
    };
    ImportedLayout imported = import_layout_text(req.body, space);
    const ScoringParams params(param("alpha", 0.5), param("theta", 0.1));
    Json out{{"n_s", imported.layout.n_storage()},
             {"n_pf", imported.layout.n_pick_faces()},
             {"warnings", imported.warnings},
             {"layout", layout_to_json(imported.layout, params)}};
    if (req.has_param("job")) {
      auto job = find_job(req.get_param_value("job"));
      if (!job) return not_found(res, "job");
      std::string result;
      {
        std::lock_guard lock(mutex_);
        if (job->state != JobState::Done || job->kind != "sweep") {
          return error(res, 409, "NotFinished", "comparison needs a finished sweep job");
        }
        result = job->result;
      }
      const ParetoSet set = pareto_from_json(Json::parse(result));
      out["comparison"] = comparison_to_json(compare(imported.layout, set));
    }
    res.set_content(out.dump(), "application/json");
  }

  void persist(const std::string& name, const std::string& text) {
    if (!options_.data_dir) return;
    detail::write_file(*options_.data_dir / (name + ".json"), text);
  }

  void execute(Job& job) {
    std::map<std::string, std::string> layouts;
    std::string result;
    if (job.kind == "solve") {
      SearchResult r = generate(job.space, *job.params, job.config, job.stop.get_token());
      result = result_to_json(r).dump(2);
      layouts.emplace(job.id + "-0", result);
    } else {
      SweepOptions options;
      options.workers = options_.workers;
      options.grid = job.grid;
      options.stop = job.stop.get_token();
      options.on_progress = [this, &job](std::size_t done, std::size_t) {
        std::lock_guard lock(mutex_);
        job.completed = std::max(job.completed, done);
      };
      ParetoSet set = pareto_sweep(job.space, job.config, options);
      std::optional<RefineOutcome> refinement;
      if (!job.refiners.empty()) refinement = apply_refiners(set.candidates, job.refiners);
      result = pareto_to_json(set, refinement).dump(2);
      for (std::size_t i = 0; i < set.candidates.size(); ++i) {
        layouts.emplace(job.id + "-" + std::to_string(i), result_to_json(set.candidates[i]).dump(2));
      }
    }
    persist(job.id, result);
    for (const auto& [id, text] : layouts) persist(id, text);
    std::lock_guard lock(mutex_);
    for (auto& [id, text] : layouts) {
      job.layout_ids.push_back(id);
      layouts_.emplace(id, std::move(text));
    }
    job.result = std::move(result);
    job.completed = job.total;
    job.state = JobState::Done;
  }

  void run_jobs(std::stop_token st) {
    for (;;) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock lock(mutex_);
        wake_.wait(lock, [&] { return st.stop_requested() || !queue_.empty(); });
        if (st.stop_requested()) return;
        job = queue_.front();
        queue_.pop_front();
        if (job->state != JobState::Queued) continue;  // cancelled while queued
        job->state = JobState::Running;
      }
      try {
        execute(*job);
      } catch (const std::exception& e) {
        std::lock_guard lock(mutex_);
        job->state = JobState::Failed;
        job->failure = job->stop.stop_requested() ? "cancelled" : e.what();
      }
    }
  }

  ServiceOptions options_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::map<std::string, StoredSpace> spaces_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  std::map<std::string, std::string> layouts_;
  std::deque<std::shared_ptr<Job>> queue_;
  std::size_t space_counter_ = 0;
  std::size_t job_counter_ = 0;
  std::jthread runner_;  // last member: joins before the state above is destroyed
};

}  // namespace wlayout

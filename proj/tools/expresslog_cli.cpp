/*
 * Copyright 2026 The expresslog Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "expresslog/expresslog.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Owns a string handed out by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { exl_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

int report_failure(exl_status status) {
  std::fprintf(stderr, "expresslog: %s: %s\n", exl_status_name(status), exl_last_error());
  switch (status) {
    case EXL_OK: return kExitOk;
    case EXL_ERR_INVALID_ARGUMENT:
    case EXL_ERR_NOT_FOUND:
    case EXL_ERR_IO:
    case EXL_ERR_PARSE: return kExitUsage;
    default: return kExitCheckFailed;
  }
}

// Blocks until SIGINT or SIGTERM. The mask is installed before any server
// thread starts so only this thread receives them.
sigset_t block_stop_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

void wait_for_stop(const sigset_t& set) {
  int sig = 0;
  sigwait(&set, &sig);
}

void print(const std::string& text) {
  std::fwrite(text.data(), 1, text.size(), stdout);
  if (!text.empty() && text.back() != '\n') std::fputc('\n', stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavior capture, sync and analysis toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", exl_version());

  std::string data_dir = exl_default_data_dir();
  std::string scenario, out_dir, store_url, weather_mode, host = "127.0.0.1", log_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> freshness_ms, tolerance_ms;
  int port = 0;
  bool as_json = false;

  auto* simulate = app.add_subcommand("simulate", "Run a scenario through capture and store");
  simulate->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out_dir, "Directory for events, store dump and loss summary");
  simulate->add_option("--seed", seed, "Override the scenario seed");
  simulate->add_option("--freshness-ms", freshness_ms, "Sensor freshness window");
  simulate->add_option("--weather-mode", weather_mode, "simulated, fixture, live or off")
      ->check(CLI::IsMember({"simulated", "fixture", "live", "off"}));
  simulate->add_option("--store-url", store_url, "Deliver to a running store instead");

  std::string which;
  std::vector<std::string> inputs;
  auto* report = app.add_subcommand("report", "Analyse logs and score sheets");
  report->add_option("which", which, "alignment, completeness, kappa or frequency")
      ->required()
      ->check(CLI::IsMember({"alignment", "completeness", "kappa", "frequency"}));
  report->add_option("inputs", inputs,
                     "alignment: REFERENCE FIRST SECOND; completeness: RECORDS; "
                     "kappa: RATER1 RATER2; frequency: CONSENSUS or RATER1 RATER2 RESOLUTIONS. "
                     "Omitted: bundled fixtures");
  report->add_option("--out", out_dir, "Directory for <which>.json and <which>.txt");
  report->add_option("--tolerance-ms", tolerance_ms, "Alignment match tolerance");
  report->add_flag("--json", as_json, "Print the machine-readable report");

  auto* reproduce = app.add_subcommand("reproduce", "Re-derive the reference figures from bundled fixtures");
  reproduce->add_option("--data-dir", data_dir, "Fixture root");
  reproduce->add_flag("--json", as_json, "Print the machine-readable summary");

  auto* serve_store = app.add_subcommand("serve-store", "Serve the record store over HTTP");
  serve_store->add_option("--host", host);
  serve_store->add_option("--port", port)->default_val(8700);
  serve_store->add_option("--log", log_path, "Append-only store log, replayed on start");

  auto* serve_capture = app.add_subcommand("serve-capture", "Serve the capture API over HTTP");
  serve_capture->add_option("--host", host);
  serve_capture->add_option("--port", port)->default_val(8600);
  serve_capture->add_option("--store-url", store_url, "Record store; default is in-process");
  serve_capture->add_option("--scenario", scenario, "Sensor layout for the simulated feed")
      ->check(CLI::ExistingFile);
  serve_capture->add_option("--weather-mode", weather_mode, "simulated, fixture, live or off")
      ->check(CLI::IsMember({"simulated", "fixture", "live", "off"}));
  serve_capture->add_option("--freshness-ms", freshness_ms, "Sensor freshness window");
  serve_capture->add_option("--log", log_path, "Event log mirror file");

  std::uint64_t fixture_seed = 20'230'520;
  auto* gen = app.add_subcommand("gen-fixtures", "Regenerate the bundled fixtures");
  gen->add_option("--out", data_dir, "Fixture root");
  gen->add_option("--seed", fixture_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (simulate->parsed()) {
    nlohmann::json opts = nlohmann::json::object();
    if (seed) opts["seed"] = *seed;
    if (freshness_ms) opts["freshness_ms"] = *freshness_ms;
    if (!weather_mode.empty()) opts["weather_mode"] = weather_mode;
    if (!store_url.empty()) opts["store_url"] = store_url;
    if (!out_dir.empty()) opts["out_dir"] = out_dir;
    LibString summary;
    const auto status = exl_simulate(scenario.c_str(), opts.dump().c_str(), &summary.p);
    if (status != EXL_OK) return report_failure(status);
    print(summary.str());
    return kExitOk;
  }

  if (report->parsed()) {
    nlohmann::json in = nlohmann::json::object();
    auto need = [&](std::initializer_list<std::size_t> counts) {
      for (auto c : counts) {
        if (inputs.size() == c) return true;
      }
      std::fprintf(stderr, "expresslog: report %s: wrong number of inputs (%zu)\n", which.c_str(),
                   inputs.size());
      return false;
    };
    if (which == "alignment") {
      if (!need({0, 3})) return kExitUsage;
      if (inputs.size() == 3) {
        in["reference"] = inputs[0];
        in["first"] = inputs[1];
        in["second"] = inputs[2];
      }
      if (tolerance_ms) in["tolerance_ms"] = *tolerance_ms;
    } else if (which == "completeness") {
      if (!need({0, 1})) return kExitUsage;
      if (inputs.size() == 1) in["records"] = inputs[0];
    } else if (which == "kappa") {
      if (!need({0, 2})) return kExitUsage;
      if (inputs.size() == 2) {
        in["rater1"] = inputs[0];
        in["rater2"] = inputs[1];
      }
    } else {
      if (!need({0, 1, 3})) return kExitUsage;
      if (inputs.size() == 1) in["consensus"] = inputs[0];
      if (inputs.size() == 3) {
        in["rater1"] = inputs[0];
        in["rater2"] = inputs[1];
        in["resolutions"] = inputs[2];
      }
    }
    LibString doc, text;
    const auto status = exl_report(which.c_str(), in.dump().c_str(),
                                   out_dir.empty() ? nullptr : out_dir.c_str(), &doc.p, &text.p);
    if (status != EXL_OK) return report_failure(status);
    print(as_json ? doc.str() : text.str());
    return kExitOk;
  }

  if (reproduce->parsed()) {
    LibString doc, text;
    const auto status = exl_reproduce(data_dir.c_str(), &doc.p, &text.p);
    if (status != EXL_OK && status != EXL_ERR_CHECK_FAILED) return report_failure(status);
    print(as_json ? doc.str() : text.str());
    return status == EXL_OK ? kExitOk : kExitCheckFailed;
  }

  if (serve_store->parsed()) {
    const sigset_t stop = block_stop_signals();
    exl_store* store = nullptr;
    auto status = exl_store_open(log_path.empty() ? nullptr : log_path.c_str(), &store);
    if (status != EXL_OK) return report_failure(status);
    int bound = 0;
    status = exl_store_serve(store, host.c_str(), port, &bound);
    if (status != EXL_OK) {
      exl_store_close(store);
      return report_failure(status);
    }
    std::printf("store listening on http://%s:%d\n", host.c_str(), bound);
    std::fflush(stdout);
    wait_for_stop(stop);
    exl_store_close(store);
    return kExitOk;
  }

  if (serve_capture->parsed()) {
    const sigset_t stop = block_stop_signals();
    nlohmann::json cfg = nlohmann::json::object();
    if (!store_url.empty()) cfg["store_url"] = store_url;
    if (!scenario.empty()) cfg["scenario"] = scenario;
    if (!weather_mode.empty()) cfg["weather_mode"] = weather_mode;
    if (freshness_ms) cfg["freshness_ms"] = *freshness_ms;
    if (!log_path.empty()) cfg["log_path"] = log_path;
    exl_capture* capture = nullptr;
    auto status = exl_capture_open(cfg.dump().c_str(), &capture);
    if (status != EXL_OK) return report_failure(status);
    int bound = 0;
    status = exl_capture_serve(capture, host.c_str(), port, &bound);
    if (status != EXL_OK) {
      exl_capture_close(capture);
      return report_failure(status);
    }
    std::printf("capture listening on http://%s:%d\n", host.c_str(), bound);
    std::fflush(stdout);
    wait_for_stop(stop);
    exl_capture_close(capture);
    return kExitOk;
  }

  if (gen->parsed()) {
    const auto status = exl_generate_fixtures(data_dir.c_str(), fixture_seed);
    if (status != EXL_OK) return report_failure(status);
    std::printf("fixtures written to %s\n", data_dir.c_str());
    return kExitOk;
  }
  return kExitUsage;
}

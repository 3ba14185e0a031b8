// s3d: the slice management service. Loads the deployment config, recovers
// slice inventory from the data directory and serves the JSON API.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "s3/config.hpp"
#include "s3/http_service.hpp"
#include "s3/orchestrator.hpp"

namespace {

s3::HttpService* g_service = nullptr;

void handle_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v != nullptr ? v : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"s3d - satellite slice service"};
  std::string config_path = env_or("S3_CONFIG", "");
  std::string data_dir = env_or("S3_DATA_DIR", "");
  std::string listen = env_or("S3_LISTEN", "127.0.0.1:8080");
  app.add_option("--config", config_path, "config file (JSON); defaults apply when unset");
  app.add_option("--data-dir", data_dir, "event log + snapshot directory; empty disables");
  app.add_option("--listen", listen, "bind address host:port");
  CLI11_PARSE(app, argc, argv);

  s3::ServiceConfig cfg = s3::ServiceConfig::defaults();
  if (!config_path.empty()) {
    auto loaded = s3::load_config(config_path);
    if (!loaded.ok()) {
      std::cerr << "config error: " << loaded.error().code << " " << loaded.error().message
                << "\n";
      return 1;
    }
    cfg = loaded.value();
  }

  auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "listen address must be host:port\n";
    return 1;
  }
  const std::string host = listen.substr(0, colon);
  const int port = std::atoi(listen.substr(colon + 1).c_str());

  try {
    s3::Orchestrator orch(cfg, {data_dir, true});
    s3::HttpService service(orch);
    g_service = &service;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    std::cout << "s3d listening on " << host << ":" << port;
    if (!data_dir.empty()) std::cout << " (data: " << data_dir << ")";
    std::cout << std::endl;
    if (!service.listen(host, port)) {
      std::cerr << "failed to bind " << listen << "\n";
      return 1;
    }
    orch.shutdown();  // snapshot on clean exit
  } catch (const s3::CorruptLog& e) {
    std::cerr << "startup halted: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

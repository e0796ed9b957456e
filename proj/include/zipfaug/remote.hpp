#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "zipfaug/generator.hpp"

namespace zipfaug {

struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HttpStatusError : std::runtime_error {
  int status;
  HttpStatusError(const std::string& msg, int code) : std::runtime_error(msg), status(code) {}
};

struct MalformedResponse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WrongOutputCount : std::runtime_error {
  std::size_t expected;
  std::size_t got;
  WrongOutputCount(std::size_t want, std::size_t have)
      : std::runtime_error("expected " + std::to_string(want) + " generation outputs, got " +
                           std::to_string(have)),
        expected(want),
        got(have) {}
};

struct RemoteConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:8080/generate
  int timeout_ms = 5000;
  int max_retries = 2;   // retries after the first attempt
  int backoff_ms = 100;  // doubled per retry
};

namespace detail {

struct ParsedUrl {
  std::string host;
  int port = 80;
  std::string path = "/";
};

inline ParsedUrl parse_http_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0)
    throw std::invalid_argument("endpoint must start with http:// : " + url);
  std::string rest = url.substr(scheme.size());
  ParsedUrl out;
  auto slash = rest.find('/');
  std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
  if (slash != std::string::npos) out.path = rest.substr(slash);
  auto colon = authority.find(':');
  if (colon == std::string::npos) {
    out.host = authority;
  } else {
    out.host = authority.substr(0, colon);
    out.port = std::stoi(authority.substr(colon + 1));
  }
  if (out.host.empty()) throw std::invalid_argument("endpoint has no host: " + url);
  return out;
}

}  // namespace detail

// POSTs {prompt, max_length, num_return, seed} and expects {outputs: [text]}
// with exactly num_return strings. Transport failures and 5xx responses are
// retried with exponential backoff; protocol violations are not.
inline std::vector<std::string> remote_generate(const RemoteConfig& config,
                                                const GeneratorRequest& request) {
  const auto url = detail::parse_http_url(config.endpoint);
  httplib::Client client(url.host, url.port);
  client.set_connection_timeout(std::chrono::milliseconds(config.timeout_ms));
  client.set_read_timeout(std::chrono::milliseconds(config.timeout_ms));
  client.set_write_timeout(std::chrono::milliseconds(config.timeout_ms));

  const nlohmann::json body = {{"prompt", request.prompt},
                               {"max_length", request.max_length},
                               {"num_return", request.num_return},
                               {"seed", request.seed}};
  const std::string payload = body.dump();

  const int attempts = config.max_retries + 1;
  httplib::Result res;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config.backoff_ms << (attempt - 1)));
    res = client.Post(url.path, payload, "application/json");
    if (!res) continue;                      // transport error: retry
    if (res->status / 100 == 5) continue;    // server error: retry
    break;
  }
  if (!res)
    throw TransportError("no response from " + config.endpoint + " after " +
                         std::to_string(attempts) + " attempt(s): " +
                         httplib::to_string(res.error()));
  if (res->status / 100 != 2)
    throw HttpStatusError("generator endpoint " + config.endpoint + " returned HTTP " +
                              std::to_string(res->status),
                          res->status);

  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponse(std::string("response body is not valid JSON: ") + e.what());
  }
  if (!parsed.is_object() || !parsed.contains("outputs") || !parsed["outputs"].is_array())
    throw MalformedResponse("response JSON lacks an `outputs` array");
  std::vector<std::string> outputs;
  for (const auto& item : parsed["outputs"]) {
    if (!item.is_string()) throw MalformedResponse("`outputs` entries must be strings");
    outputs.push_back(item.get<std::string>());
  }
  if (outputs.size() != request.num_return)
    throw WrongOutputCount(request.num_return, outputs.size());
  return outputs;
}

class RemoteGenerator : public TextGenerator {
 public:
  explicit RemoteGenerator(RemoteConfig config) : config_(std::move(config)) {}

  std::string id() const override { return "remote:" + config_.endpoint; }

  std::vector<std::string> generate(const GeneratorRequest& request) override {
    return remote_generate(config_, request);
  }

 private:
  RemoteConfig config_;
};

}  // namespace zipfaug

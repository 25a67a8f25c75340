#include <cstdlib>
#include <regex>

#include <httplib.h>
#include <json.hpp>

#include "dgr/errors.hpp"
#include "dgr/generator.hpp"

namespace dgr {

using nlohmann::json;

HttpGenerator::HttpGenerator(HttpGeneratorOptions options) : options_(std::move(options)) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(options_.endpoint, m, kUrl)) {
    throw ConfigError("generator endpoint is not an http(s) URL: " + options_.endpoint);
  }
  scheme_host_port_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme_host_port_.starts_with("https")) {
    throw ConfigError("this build has no TLS support; use an http:// endpoint");
  }
#endif
}

HttpGenerator::~HttpGenerator() = default;

std::string parse_completion_body(const std::string& body) {
  json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return body;
  if (doc.is_string()) return doc.get<std::string>();
  if (!doc.is_object()) return body;
  for (const char* key : {"text", "completion", "response", "output"}) {
    if (doc.contains(key) && doc[key].is_string()) return doc[key].get<std::string>();
  }
  if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
    const auto& choice = doc["choices"][0];
    if (choice.contains("text") && choice["text"].is_string()) return choice["text"];
    if (choice.contains("message") && choice["message"].contains("content") &&
        choice["message"]["content"].is_string()) {
      return choice["message"]["content"];
    }
  }
  throw GeneratorError("endpoint reply carries no completion text");
}

std::string HttpGenerator::complete(const std::string& prompt) {
  json request = {{"prompt", prompt}};
  if (!options_.model.empty()) request["model"] = options_.model;
  if (options_.max_tokens) request["max_tokens"] = *options_.max_tokens;
  if (options_.temperature) request["temperature"] = *options_.temperature;

  httplib::Headers headers;
  if (const char* token = std::getenv(options_.token_env.c_str()); token && *token) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= options_.transport_retries; ++attempt) {
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    auto res = client.Post(path_, headers, request.dump(), "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server error " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw GeneratorError("endpoint returned status " + std::to_string(res->status) + ": " +
                           res->body.substr(0, 200));
    }
    return parse_completion_body(res->body);
  }
  throw GeneratorError("generator request failed after retries (" + last_error + ")");
}

}  // namespace dgr

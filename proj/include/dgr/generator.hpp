#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace dgr {

/// A text generator seen as a pure prompt -> reply exchange. Implementations
/// throw GeneratorError on transport failure.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

/// Replies with the prompt itself. Used to check prompt construction.
class EchoGenerator final : public Generator {
 public:
  std::string complete(const std::string& prompt) override { return prompt; }
};

struct HttpGeneratorOptions {
  std::string endpoint;  // e.g. http://localhost:8000/v1/completions
  std::string model;
  std::optional<int> max_tokens;
  std::optional<double> temperature;
  std::chrono::seconds timeout{300};
  int transport_retries = 1;
  /// Name of the environment variable holding a bearer token (may be unset).
  std::string token_env = "DGR_API_TOKEN";
};

/// Single-turn completion over HTTP.
///
/// Request body: {"model", "prompt", "max_tokens"?, "temperature"?} as JSON.
/// Accepted replies: JSON with "text", "completion", "response",
/// "choices[0].text" or "choices[0].message.content"; anything that is not
/// JSON is taken verbatim as the completion text.
class HttpGenerator final : public Generator {
 public:
  explicit HttpGenerator(HttpGeneratorOptions options);
  ~HttpGenerator() override;

  std::string complete(const std::string& prompt) override;

  const HttpGeneratorOptions& options() const { return options_; }

 private:
  HttpGeneratorOptions options_;
  std::string scheme_host_port_;
  std::string path_;
};

/// Pulls the completion text out of an endpoint reply body.
std::string parse_completion_body(const std::string& body);

/// Deterministic stand-in for the reasoning model.
///
/// Reasoning prompts get a `<|thinking|>` block whose graph section lists
/// "A -- KIND -- B" lines. Concepts come from an internal vocabulary and
/// edges grow by preferential attachment, so the accumulated graph has a
/// heavy-tailed degree distribution. Formatting prompts are answered with
/// the adjacency-map literal for the graph section they quote, and
/// follow-up prompts with a question naming one of the listed keywords.
class SyntheticGenerator final : public Generator {
 public:
  explicit SyntheticGenerator(std::uint64_t seed, std::size_t vocabulary_size = 40);

  std::string complete(const std::string& prompt) override;

  /// Every (prompt, reply) exchanged so far.
  const std::vector<std::pair<std::string, std::string>>& transcript() const {
    return transcript_;
  }
  std::size_t concept_count() const { return concepts_.size(); }

 private:
  std::string reasoning_reply(const std::string& prompt);
  std::string followup_reply(const std::string& prompt);
  std::string next_concept();
  std::size_t pick_by_degree();

  std::mt19937_64 rng_;
  std::vector<std::string> concept_pool_;
  std::size_t pool_cursor_ = 0;
  std::vector<std::string> concepts_;
  // One entry per edge endpoint; sampling from it is degree-proportional.
  std::vector<std::size_t> endpoint_pool_;
  std::vector<std::pair<std::string, std::string>> transcript_;
};

}  // namespace dgr

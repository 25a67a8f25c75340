#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "dgr/errors.hpp"
#include "dgr/generator.hpp"

using namespace dgr;

TEST(CompletionBody, AcceptedShapes) {
  EXPECT_EQ(parse_completion_body(R"({"text": "a"})"), "a");
  EXPECT_EQ(parse_completion_body(R"({"completion": "b"})"), "b");
  EXPECT_EQ(parse_completion_body(R"({"choices": [{"text": "c"}]})"), "c");
  EXPECT_EQ(parse_completion_body(R"({"choices": [{"message": {"content": "d"}}]})"), "d");
  EXPECT_EQ(parse_completion_body("plain text reply"), "plain text reply");
  EXPECT_EQ(parse_completion_body(R"("quoted")"), "quoted");
  EXPECT_THROW(parse_completion_body(R"({"unexpected": 1})"), GeneratorError);
}

TEST(HttpGeneratorOptions, RejectsNonHttpUrl) {
  HttpGeneratorOptions o;
  o.endpoint = "ftp://example.org";
  EXPECT_THROW(HttpGenerator{o}, ConfigError);
}

namespace {

class LocalServer {
 public:
  LocalServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Server& server() { return server_; }
  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace

TEST(HttpGenerator, PostsPromptAndReadsText) {
  std::string seen_body, seen_auth;
  LocalServer local;
  local.server().Post("/complete", [&](const httplib::Request& req, httplib::Response& res) {
    seen_body = req.body;
    seen_auth = req.get_header_value("Authorization");
    res.set_content(R"({"choices": [{"text": "reply"}]})", "application/json");
  });
  // Registering after listen is fine for httplib; routes are looked up per request.
  setenv("DGR_TEST_TOKEN", "secret", 1);
  HttpGeneratorOptions o;
  o.endpoint = local.url("/complete");
  o.model = "tiny";
  o.temperature = 0.2;
  o.token_env = "DGR_TEST_TOKEN";
  HttpGenerator gen(o);
  EXPECT_EQ(gen.complete("hello"), "reply");
  auto body = nlohmann::json::parse(seen_body);
  EXPECT_EQ(body["prompt"], "hello");
  EXPECT_EQ(body["model"], "tiny");
  EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.2);
  EXPECT_FALSE(body.contains("max_tokens"));
  EXPECT_EQ(seen_auth, "Bearer secret");
}

TEST(HttpGenerator, RetriesServerErrors) {
  std::atomic<int> calls{0};
  LocalServer local;
  local.server().Post("/flaky", [&](const httplib::Request&, httplib::Response& res) {
    if (calls++ == 0) {
      res.status = 503;
      return;
    }
    res.set_content(R"({"text": "second"})", "application/json");
  });
  HttpGeneratorOptions o;
  o.endpoint = local.url("/flaky");
  o.transport_retries = 1;
  HttpGenerator gen(o);
  EXPECT_EQ(gen.complete("x"), "second");
  EXPECT_EQ(calls.load(), 2);
}

TEST(HttpGenerator, GivesUpAfterRetries) {
  std::atomic<int> calls{0};
  LocalServer local;
  local.server().Post("/down", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 500;
  });
  HttpGeneratorOptions o;
  o.endpoint = local.url("/down");
  o.transport_retries = 2;
  HttpGenerator gen(o);
  EXPECT_THROW(gen.complete("x"), GeneratorError);
  EXPECT_EQ(calls.load(), 3);
}

TEST(HttpGenerator, ClientErrorIsNotRetried) {
  std::atomic<int> calls{0};
  LocalServer local;
  local.server().Post("/bad", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 400;
    res.set_content("bad request", "text/plain");
  });
  HttpGeneratorOptions o;
  o.endpoint = local.url("/bad");
  HttpGenerator gen(o);
  EXPECT_THROW(gen.complete("x"), GeneratorError);
  EXPECT_EQ(calls.load(), 1);
}

TEST(HttpGenerator, UnreachableEndpoint) {
  HttpGeneratorOptions o;
  o.endpoint = "http://127.0.0.1:1/none";
  o.timeout = std::chrono::seconds(2);
  o.transport_retries = 0;
  HttpGenerator gen(o);
  EXPECT_THROW(gen.complete("x"), GeneratorError);
}

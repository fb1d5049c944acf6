#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "testgen/error.hpp"
#include "testgen/llm/gateway.hpp"
#include "testgen/llm/http_gateway.hpp"
#include "testgen/llm/record_replay.hpp"
#include "testgen/llm/sha256.hpp"

using namespace testgen;
using namespace testgen::llm;

namespace {

SamplingConfig fast_config() {
    SamplingConfig cfg;
    cfg.max_retries = 2;
    cfg.retry_base_ms = 0;
    cfg.endpoint = "http://unused";
    return cfg;
}

}  // namespace

TEST(SamplingConfig, PaperDefaults) {
    SamplingConfig cfg;
    EXPECT_DOUBLE_EQ(cfg.temperature, 0.2);
    EXPECT_EQ(cfg.max_tokens, 1024);
}

TEST(ScriptedGateway, CannedReply) {
    ScriptedGateway g;
    g.add_rule("hello", "world");
    SamplingConfig cfg;
    EXPECT_EQ(g.complete("say hello", cfg).text, "world");
    EXPECT_THROW(g.complete("say hello", cfg), TransportError);  // rule consumed
}

TEST(Sha256, KnownVector) {
    EXPECT_EQ(sha256_hex(""),
              "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(HttpGateway, AuthErrorNeverRetries) {
    int calls = 0;
    HttpChatGateway g([&](const std::string&, const std::string&, const std::string&) {
        ++calls;
        return HttpExchange{true, 401, "{}", ""};
    });
    EXPECT_THROW(g.complete("p", fast_config()), AuthError);
    EXPECT_EQ(calls, 1);
}

TEST(HttpGateway, TransientFailuresRetryThenSucceed) {
    int calls = 0;
    HttpChatGateway g([&](const std::string&, const std::string&, const std::string&) {
        ++calls;
        if (calls <= 2) return HttpExchange{false, 0, "", "timeout"};
        return HttpExchange{
            true, 200,
            R"({"choices":[{"message":{"content":"ok"}}],"usage":{"prompt_tokens":7,"completion_tokens":3}})",
            ""};
    });
    Completion c = g.complete("p", fast_config());
    EXPECT_EQ(c.text, "ok");
    EXPECT_EQ(c.retries, 2);
    EXPECT_EQ(calls, 3);
    ASSERT_TRUE(c.prompt_tokens.has_value());
    EXPECT_EQ(*c.prompt_tokens, 7);
}

TEST(HttpGateway, ExhaustedRetriesRaiseTransportError) {
    int calls = 0;
    HttpChatGateway g([&](const std::string&, const std::string&, const std::string&) {
        ++calls;
        return HttpExchange{true, 503, "overloaded", ""};
    });
    EXPECT_THROW(g.complete("p", fast_config()), TransportError);
    EXPECT_EQ(calls, 3);  // initial attempt + 2 retries
}

TEST(HttpGateway, ContextLengthMapsToBudgetError) {
    HttpChatGateway g([](const std::string&, const std::string&, const std::string&) {
        return HttpExchange{true, 400,
                            R"({"error":{"message":"maximum context length exceeded"}})", ""};
    });
    EXPECT_THROW(g.complete("p", fast_config()), BudgetError);
}

TEST(HttpGateway, RequestBodyCarriesSamplingFields) {
    std::string seen_body;
    HttpChatGateway g([&](const std::string&, const std::string& body, const std::string&) {
        seen_body = body;
        return HttpExchange{true, 200, R"({"choices":[{"message":{"content":""}}]})", ""};
    });
    SamplingConfig cfg = fast_config();
    cfg.model_id = "test-model";
    cfg.temperature = 0.2;
    cfg.max_tokens = 1024;
    g.complete("prompt text", cfg);
    EXPECT_NE(seen_body.find("\"model\":\"test-model\""), std::string::npos);
    EXPECT_NE(seen_body.find("\"temperature\":0.2"), std::string::npos);
    EXPECT_NE(seen_body.find("\"max_tokens\":1024"), std::string::npos);
    EXPECT_NE(seen_body.find("prompt text"), std::string::npos);
}

TEST(HttpGateway, RealServerRoundTrip) {
    httplib::Server server;
    server.Post("/v1/chat/completions",
                [](const httplib::Request& req, httplib::Response& res) {
                    EXPECT_NE(req.body.find("ping"), std::string::npos);
                    res.set_content(R"({"choices":[{"message":{"content":"pong"}}]})",
                                    "application/json");
                });
    int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpChatGateway g;
    SamplingConfig cfg = fast_config();
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    Completion c = g.complete("ping", cfg);
    EXPECT_EQ(c.text, "pong");

    server.stop();
    t.join();
}

TEST(RecordReplay, RoundTripServesIdenticalCompletions) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "testgen_session_rt";
    fs::remove_all(dir);

    ScriptedGateway inner;
    inner.add_rule("one", "first completion");
    inner.add_rule("two", "second completion");
    inner.add_rule("three", "third completion");
    RecordingGateway recorder(inner, dir.string());
    SamplingConfig cfg;
    std::string r1 = recorder.complete("prompt one", cfg).text;
    std::string r2 = recorder.complete("prompt two", cfg).text;
    std::string r3 = recorder.complete("prompt three", cfg).text;

    ReplayGateway replay(dir.string());
    EXPECT_EQ(replay.size(), 3u);
    EXPECT_EQ(replay.complete("prompt one", cfg).text, r1);
    EXPECT_EQ(replay.complete("prompt two", cfg).text, r2);
    EXPECT_EQ(replay.complete("prompt three", cfg).text, r3);
    fs::remove_all(dir);
}

TEST(RecordReplay, UnseenPromptIsReplayMiss) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "testgen_session_miss";
    fs::remove_all(dir);
    ScriptedGateway inner;
    inner.add_rule("known", "reply");
    RecordingGateway recorder(inner, dir.string());
    SamplingConfig cfg;
    recorder.complete("known prompt", cfg);

    ReplayGateway replay(dir.string());
    EXPECT_THROW(replay.complete("never recorded", cfg), ReplayMissError);
    fs::remove_all(dir);
}

TEST(RecordReplay, SessionFileSchema) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "testgen_session_schema";
    fs::remove_all(dir);
    ScriptedGateway inner;
    inner.set_fallback("the completion");
    RecordingGateway recorder(inner, dir.string());
    SamplingConfig cfg;
    cfg.model_id = "m1";
    recorder.complete("the prompt", cfg);

    std::string hash = sha256_hex("the prompt");
    fs::path file = dir / (hash + ".json");
    ASSERT_TRUE(fs::exists(file));
    std::ifstream in(file);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_NE(text.find("\"prompt_sha256\""), std::string::npos);
    EXPECT_NE(text.find("\"prompt\""), std::string::npos);
    EXPECT_NE(text.find("\"completion\""), std::string::npos);
    EXPECT_NE(text.find("\"model_id\""), std::string::npos);
    EXPECT_NE(text.find("\"timestamp\""), std::string::npos);
    fs::remove_all(dir);
}

#include "quasicross/service.hpp"

#include <gtest/gtest.h>

#include <thread>

using namespace quasicross;

namespace {

class ServiceTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        server_ = new AnalysisServer(Palette{});
        port_ = server_->bind_any_port("127.0.0.1");
        ASSERT_GT(port_, 0);
        thread_ = new std::thread([] { server_->listen_after_bind(); });
        server_->wait_until_ready();
    }

    static void TearDownTestSuite() {
        server_->stop();
        thread_->join();
        delete thread_;
        delete server_;
    }

    static httplib::Client client() {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(30, 0);
        return c;
    }

    static std::string fixture(const std::string& name) {
        return read_text_file(std::string(QUASICROSS_FIXTURES) + "/" + name);
    }

    static inline AnalysisServer* server_ = nullptr;
    static inline std::thread* thread_ = nullptr;
    static inline int port_ = 0;
};

}  // namespace

TEST_F(ServiceTest, Health) {
    auto res = client().Get("/api/health");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const json body = json::parse(res->body);
    EXPECT_EQ(body["status"], "ok");
    EXPECT_EQ(body["version"], version());
}

TEST_F(ServiceTest, AnalyzeConvexSix) {
    auto res = client().Post("/api/analyze", fixture("convex_k6.json"), "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const json body = json::parse(res->body);
    EXPECT_EQ(body["triple_count"], 1);
    EXPECT_EQ(body["crossing_pair_count"], 15);
    EXPECT_EQ(body, analysis_json(convex_complete(6)));
}

TEST_F(ServiceTest, AnalyzeReportsViolations) {
    auto res = client().Post("/api/analyze", fixture("invalid_edge_through_vertex.json"), "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const json body = json::parse(res->body);
    EXPECT_FALSE(body["validation"]["is_valid"].get<bool>());
    EXPECT_EQ(body["validation"]["violations"][0]["kind"], "EdgeThroughVertex");
    EXPECT_TRUE(body["triple_count"].is_null());
}

TEST_F(ServiceTest, Bounds) {
    auto res = client().Post("/api/bounds", R"({"n": 11, "e": 55})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const json body = json::parse(res->body);
    EXPECT_EQ(body["eq1"], "7/2");
    EXPECT_EQ(body["best_integer_lower_bound"], "4");

    auto bad = client().Post("/api/bounds", R"({"n": 3, "e": 2})", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    EXPECT_EQ(json::parse(bad->body)["error"]["kind"], "bound_input");

    auto wrong = client().Post("/api/bounds", R"({"n": "11", "e": 55})", "application/json");
    ASSERT_TRUE(wrong);
    EXPECT_EQ(wrong->status, 400);
    EXPECT_EQ(json::parse(wrong->body)["error"]["context"], "$.n");
}

TEST_F(ServiceTest, Svg) {
    auto res = client().Post("/api/svg", fixture("convex_k6.json"), "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->get_header_value("Content-Type"), "image/svg+xml");
    EXPECT_EQ(res->body, render_svg(convex_complete(6)));

    auto invalid = client().Post("/api/svg", fixture("invalid_concurrent.json"), "application/json");
    ASSERT_TRUE(invalid);
    EXPECT_EQ(invalid->status, 422);
    EXPECT_EQ(json::parse(invalid->body)["error"]["kind"], "invalid_drawing");
}

TEST_F(ServiceTest, MalformedPayloads) {
    for (const char* path : {"/api/analyze", "/api/svg"}) {
        auto res = client().Post(path, R"({"format_version": 1, "vertices": [)", "application/json");
        ASSERT_TRUE(res);
        EXPECT_EQ(res->status, 400) << path;
        EXPECT_EQ(json::parse(res->body)["error"]["kind"], "syntax");
    }
    auto res = client().Post("/api/analyze",
                             R"({"format_version": 1, "vertices": [{"id": "a", "x": "1/0", "y": "0"}], "edges": []})",
                             "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
    EXPECT_EQ(json::parse(res->body)["error"]["kind"], "zero_denominator");
    EXPECT_EQ(json::parse(res->body)["error"]["context"], "$.vertices[0].x");
}

TEST_F(ServiceTest, UnknownRouteIs404) {
    auto res = client().Get("/api/nothing");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
}

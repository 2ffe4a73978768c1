#pragma once

#include "quasicross/io.hpp"
#include "quasicross/svg.hpp"

#include <httplib.h>

#include <string>

#ifndef QUASICROSS_VERSION
#define QUASICROSS_VERSION "unknown"
#endif

namespace quasicross {

inline std::string version() { return QUASICROSS_VERSION; }

namespace detail {

inline void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

inline json error_body(const std::string& kind, const std::string& message, const std::string& context = {}) {
    json e{{"kind", kind}, {"message", message}};
    if (!context.empty()) e["context"] = context;
    return json{{"error", e}};
}

/// Runs `body`, mapping malformed input to 400, a non-simple drawing to 422
/// and anything unexpected to 500.
template <class F>
void guarded(httplib::Response& res, F&& body) {
    try {
        body();
    } catch (const FormatError& e) {
        send_json(res, 400, error_body(to_string(e.kind()), e.what(), e.context()));
    } catch (const BoundError& e) {
        send_json(res, 400, error_body("bound_input", e.what()));
    } catch (const InvalidDrawing& e) {
        send_json(res, 422, error_body("invalid_drawing", e.what()));
    } catch (const std::exception& e) {
        send_json(res, 500, error_body("internal", e.what()));
    }
}

inline BoundInput bound_input_from_json(const json& v) {
    only_keys(v, {"n", "e"}, "$");
    auto number = [&](const char* key) {
        const json& f = member(v, key, "$");
        if (!f.is_number_integer()) throw FormatError(FormatErrorKind::schema, std::string("$.") + key, "expected an integer");
        return f.get<long>();
    };
    return {number("n"), number("e")};
}

}  // namespace detail

/// Installs the stateless analysis endpoints on `server`.
inline void install_routes(httplib::Server& server, Palette palette = Palette::from_environment()) {
    using detail::guarded;
    using detail::send_json;

    server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, json{{"status", "ok"}, {"version", version()}});
    });

    server.Post("/api/analyze", [](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, analysis_json(parse_drawing(req.body))); });
    });

    server.Post("/api/bounds", [](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const BoundInput in = detail::bound_input_from_json(detail::parse_json_text(req.body));
            send_json(res, 200, bound_json(best_lower_bound(in)));
        });
    });

    server.Post("/api/svg", [palette](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const Drawing d = parse_drawing(req.body);
            res.status = 200;
            res.set_content(render_svg(d, palette), "image/svg+xml");
        });
    });
}

/// Blocks serving on host:port until stop() is called from another thread.
class AnalysisServer {
public:
    explicit AnalysisServer(Palette palette = Palette::from_environment()) { install_routes(server_, std::move(palette)); }

    bool listen(const std::string& host, int port) { return server_.listen(host, port); }
    /// Binds an ephemeral port and returns it; then call listen_after_bind().
    int bind_any_port(const std::string& host) { return server_.bind_to_any_port(host); }
    bool listen_after_bind() { return server_.listen_after_bind(); }
    void wait_until_ready() { server_.wait_until_ready(); }
    void stop() { server_.stop(); }

private:
    httplib::Server server_;
};

}  // namespace quasicross

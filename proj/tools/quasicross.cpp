#include "quasicross/bounds.hpp"
#include "quasicross/io.hpp"
#include "quasicross/search.hpp"
#include "quasicross/service.hpp"
#include "quasicross/svg.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <mutex>

using namespace quasicross;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

int report_error(const std::string& kind, const std::string& message, int code, const std::string& context = {}) {
    json e{{"kind", kind}, {"message", message}};
    if (!context.empty()) e["context"] = context;
    emit(json{{"error", e}});
    std::cerr << "quasicross: " << message << '\n';
    return code;
}

std::string state_path(const std::string& checkpoint) {
    const std::string suffix = ".state.json";
    if (checkpoint.size() > suffix.size() && checkpoint.compare(checkpoint.size() - suffix.size(), suffix.size(), suffix) == 0)
        return checkpoint;
    return checkpoint + suffix;
}

/// Collects restart states and rewrites the checkpoint pair after each one.
class CheckpointWriter {
public:
    explicit CheckpointWriter(std::string path) : path_(std::move(path)) {}

    void seed(const std::vector<RestartState>& states) {
        for (const auto& s : states) states_[s.restart] = s;
    }

    void update(const RestartState& s) {
        std::lock_guard g(lock_);
        states_[s.restart] = s;
        std::vector<RestartState> all;
        const RestartState* best = nullptr;
        for (const auto& [r, st] : states_) {
            all.push_back(st);
            if (!best || st.best_objective < best->best_objective) best = &states_.at(r);
        }
        write_text_file(path_, serialize_drawing(best->best));
        write_text_file(state_path(path_), checkpoint_json(all).dump(2) + "\n");
    }

private:
    std::string path_;
    std::mutex lock_;
    std::map<std::size_t, RestartState> states_;
};

int cmd_verify(const std::string& file) {
    const Drawing d = load_drawing(file);
    const ValidationReport r = validate(d);
    emit(json{{"file", file}, {"validation", validation_json(d, r)}});
    return r.is_valid ? kOk : kInvalid;
}

int cmd_count(const std::string& file) {
    const Drawing d = load_drawing(file);
    const json a = analysis_json(d);
    emit(a);
    return a["validation"]["is_valid"].get<bool>() ? kOk : kInvalid;
}

int cmd_bounds(std::optional<long> n, std::optional<long> e, std::optional<long> complete) {
    BoundInput in;
    if (complete) {
        if (n || e) return report_error("usage", "--complete excludes --n and --e", kUsage);
        in = BoundInput::complete(*complete);
    } else if (n && e) {
        in = {*n, *e};
    } else {
        return report_error("usage", "give --n and --e, or --complete", kUsage);
    }
    try {
        emit(bound_json(best_lower_bound(in)));
    } catch (const BoundError& err) {
        return report_error("bound_input", err.what(), kUsage);
    }
    return kOk;
}

int cmd_table(long a, long b) {
    if (a < 4 || b < a) return report_error("usage", "--complete-range needs 4 <= A <= B", kUsage);
    json rows = json::array();
    for (long n = a; n <= b; ++n) {
        const BoundReport r = best_lower_bound(BoundInput::complete(n));
        rows.push_back(json{{"n", r.input.n},
                            {"e", r.input.e},
                            {"eq1", r.eq1_value.str()},
                            {"eq1_ceiling", r.eq1_value.ceil().get_str()},
                            {"best_integer_lower_bound", r.best_integer_lower_bound.get_str()}});
    }
    emit(json{{"rows", rows}});
    return kOk;
}

int cmd_subsample(const std::string& file, const std::string& p, std::uint64_t trials, std::uint64_t seed,
                  unsigned threads) {
    const Drawing d = load_drawing(file);
    Rational prob;
    try {
        prob = Rational::parse(p);
    } catch (const std::exception&) {
        return report_error("usage", "--p must be a rational such as 1/2", kUsage);
    }
    if (prob.sign() < 0 || prob > Rational(1)) return report_error("usage", "--p must lie in [0, 1]", kUsage);
    if (trials < 1) return report_error("usage", "--trials must be at least 1", kUsage);
    const ValidationReport r = validate(d);
    if (!r.is_valid) {
        emit(json{{"validation", validation_json(d, r)}});
        return kInvalid;
    }
    emit(subsample_json(monte_carlo_subsample(d, prob, trials, seed, threads)));
    return kOk;
}

int cmd_search(const std::string& file, const std::string& config_path, const std::string& resume,
               const std::string& checkpoint, const std::string& trace_path, const std::string& out_path) {
    const Drawing d = load_drawing(file);
    SearchConfig cfg;
    try {
        cfg = parse_config(read_text_file(config_path));
    } catch (const FormatError& e) {
        return report_error(to_string(e.kind()), e.what(), kUsage, e.context());
    }
    const ValidationReport r = validate(d);
    if (!r.is_valid) {
        emit(json{{"validation", validation_json(d, r)}});
        return kInvalid;
    }
    AnnealHooks hooks;
    if (!resume.empty()) hooks.resume = parse_checkpoint(read_text_file(state_path(resume)));
    std::unique_ptr<CheckpointWriter> writer;
    if (!checkpoint.empty()) {
        writer = std::make_unique<CheckpointWriter>(checkpoint);
        writer->seed(hooks.resume);
        hooks.checkpoint = [&](const RestartState& s) { writer->update(s); };
    }
    SearchConfig run = cfg;
    run.record_iterations = !trace_path.empty();
    const AnnealResult result = anneal(d, run, hooks);

    if (!trace_path.empty()) {
        std::ofstream trace(trace_path, std::ios::binary | std::ios::trunc);
        if (!trace) throw std::runtime_error("cannot write " + trace_path);
        for (const auto& t : result.traces) write_trace_lines(trace, t);
    }
    if (!out_path.empty()) write_text_file(out_path, serialize_drawing(result.best));

    json restarts = json::array();
    for (std::size_t i = 0; i < result.traces.size(); ++i) {
        const auto& t = result.traces[i];
        restarts.push_back(json{{"restart", t.restart},
                                {"iterations", result.final_states[i].iteration},
                                {"valid_proposals", t.proposals_valid},
                                {"accepted_proposals", t.proposals_accepted},
                                {"best_objective", objective_json(result.final_states[i].best_objective)},
                                {"best_timeline", best_timeline_json(t)}});
    }
    emit(json{{"config", config_json(cfg)},
              {"initial_objective", objective_json(result.initial_objective)},
              {"best_objective", objective_json(result.best_objective)},
              {"best_restart", result.best_restart},
              {"integer_kernel", result.integer_kernel},
              {"restarts", restarts},
              {"best", drawing_json(result.best)}});
    return kOk;
}

int cmd_svg(const std::string& file, const std::string& out) {
    const Drawing d = load_drawing(file);
    const ValidationReport r = validate(d);
    if (!r.is_valid) {
        emit(json{{"validation", validation_json(d, r)}});
        return kInvalid;
    }
    export_svg(d, out);
    emit(json{{"svg", out}, {"triple_count", count_triples(crossing_pairs(d)).triple_count}});
    return kOk;
}

int cmd_gen_convex(int n, const std::string& out) {
    if (n < 3 || n > 64) return report_error("usage", "N must lie in [3, 64]", kUsage);
    write_text_file(out, serialize_drawing(convex_complete(n)));
    emit(json{{"written", out}, {"n", n}});
    return kOk;
}

int cmd_serve(const std::string& host, int port) {
    AnalysisServer server;
    std::cerr << "quasicross " << version() << " serving on http://" << host << ':' << port << '\n';
    if (!server.listen(host, port)) return report_error("serve", "cannot listen on " + host + ":" + std::to_string(port), kInvalid);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact analysis of triples of pairwise crossing edges in simple drawings"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    std::string file, out, config, resume, checkpoint, trace, p = "1/2", host = "127.0.0.1";
    std::optional<long> bn, be, bcomplete;
    std::vector<long> range;
    std::uint64_t trials = 1000, seed = 1;
    unsigned threads = 0;
    int n = 0, port = 8080;

    auto* verify = app.add_subcommand("verify", "Check the simple-drawing conditions");
    verify->add_option("file", file, "Drawing file")->required();

    auto* count = app.add_subcommand("count", "Crossing pairs, triples and bounds of a drawing");
    count->add_option("file", file, "Drawing file")->required();

    auto* bounds = app.add_subcommand("bounds", "Lower bounds for a graph with n vertices and e edges");
    bounds->add_option("--n", bn, "Vertex count");
    bounds->add_option("--e", be, "Edge count");
    bounds->add_option("--complete", bcomplete, "Use the complete graph on N vertices");

    auto* table = app.add_subcommand("table", "Bounds for a range of complete graphs");
    table->add_option("--complete-range", range, "A B")->expected(2)->required();

    auto* subsample = app.add_subcommand("subsample", "Random vertex subsampling statistics");
    subsample->add_option("file", file, "Drawing file")->required();
    subsample->add_option("--p", p, "Keep probability, a rational");
    subsample->add_option("--trials", trials, "Number of trials");
    subsample->add_option("--seed", seed, "Random seed");
    subsample->add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* search = app.add_subcommand("search", "Anneal a drawing towards fewer triples");
    search->add_option("file", file, "Starting drawing")->required();
    search->add_option("--config", config, "Search configuration file")->required();
    search->add_option("--resume", resume, "Checkpoint to continue from");
    search->add_option("--checkpoint", checkpoint, "Write checkpoints to this path");
    search->add_option("--trace", trace, "Write per-iteration records (JSON lines)");
    search->add_option("--out", out, "Write the best drawing here");

    auto* svg = app.add_subcommand("svg", "Render a drawing as SVG");
    svg->add_option("file", file, "Drawing file")->required();
    svg->add_option("--out", out, "Output path")->required();

    auto* gen = app.add_subcommand("gen-convex", "Write the convex drawing of K_N");
    gen->add_option("N", n, "Vertex count")->required();
    gen->add_option("--out", out, "Output path")->required();

    auto* serve = app.add_subcommand("serve", "Run the local analysis service");
    serve->add_option("--port", port, "TCP port");
    serve->add_option("--host", host, "Interface to bind");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*verify) return cmd_verify(file);
        if (*count) return cmd_count(file);
        if (*bounds) return cmd_bounds(bn, be, bcomplete);
        if (*table) return cmd_table(range.at(0), range.at(1));
        if (*subsample) return cmd_subsample(file, p, trials, seed, threads);
        if (*search) return cmd_search(file, config, resume, checkpoint, trace, out);
        if (*svg) return cmd_svg(file, out);
        if (*gen) return cmd_gen_convex(n, out);
        if (*serve) return cmd_serve(host, port);
    } catch (const FormatError& e) {
        return report_error(to_string(e.kind()), e.what(), kInvalid, e.context());
    } catch (const InvalidDrawing& e) {
        return report_error("invalid_drawing", e.what(), kInvalid);
    } catch (const std::logic_error& e) {
        return report_error("internal", e.what(), kInternal);
    } catch (const std::exception& e) {
        return report_error("error", e.what(), kUsage);
    }
    return kUsage;
}

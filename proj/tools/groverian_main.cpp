// Command-line surface for the Groverian-measure library: analysis reports,
// verification suites, and reproducible random state generation.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grv/groverian.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSuiteFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNotConverged = 3;

struct AnalyzeArgs {
    std::string input;
    std::string format = "json";
    std::uint64_t seed = 20240901;
    int restarts = 32;
    int max_iters = 10000;
    double tol = 1e-12;
};

int run_analyze(const AnalyzeArgs& args) {
    const std::string text = grv::read_text_file(args.input);
    grv::OptimizerConfig cfg;
    cfg.restarts = args.restarts;
    cfg.max_iters = args.max_iters;
    cfg.convergence_tol = args.tol;
    cfg.seed = args.seed;

    // A file that parses as one JSON document is a single state; otherwise
    // it is treated as JSON-lines, one state per line.
    std::vector<nlohmann::json> docs;
    bool single = false;
    try {
        docs.push_back(nlohmann::json::parse(text));
        single = true;
    } catch (const nlohmann::json::exception&) {
        std::istringstream lines(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(lines, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            try {
                docs.push_back(nlohmann::json::parse(line));
            } catch (const nlohmann::json::exception& e) {
                throw grv::ParseError("line " + std::to_string(lineno) + ": invalid JSON: " +
                                      e.what());
            }
        }
    }
    if (docs.empty()) throw grv::ParseError("input contains no state documents");

    bool all_converged = true;
    for (const auto& doc : docs) {
        const grv::StateFile sf = grv::parse_state_file(doc);
        const grv::Report rep = grv::analyze(sf, cfg);
        all_converged = all_converged && rep.numeric.converged;
        if (args.format == "text")
            std::cout << grv::report_to_text(rep) << (single ? "" : "\n");
        else
            std::cout << grv::report_to_json(rep, single) << "\n";
    }
    return all_converged ? kExitOk : kExitNotConverged;
}

struct VerifyArgs {
    std::string suite;
    int n = 0;
    std::uint64_t seed = 20240901;
    double tol = 0.0;
    int restarts = 32;
};

int run_verify(const VerifyArgs& args) {
    grv::VerifyOptions opts;
    opts.n = args.n;
    opts.seed = args.seed;
    opts.tol = args.tol;
    opts.restarts = args.restarts;
    const grv::SuiteResult res = grv::run_suite(args.suite, opts);
    std::cout << grv::suite_result_to_json(res, true) << "\n";
    return res.pass ? kExitOk : kExitSuiteFail;
}

struct RandomArgs {
    std::string kind;
    int n = 1;
    std::uint64_t seed = 20240901;
    std::string out;
};

std::string state_line(const std::string& kind, std::uint64_t seed) {
    grv::JsonWriter w(false);
    auto put_pairs = [&w](const auto& amps) {
        w.arr_open();
        for (const auto& z : amps)
            w.arr_open().num(z.real()).num(z.imag()).arr_close();
        w.arr_close();
    };
    w.obj_open();
    if (kind == "ghz") {
        const double s = 1.0 / std::sqrt(2.0);
        w.key("acin").obj_open();
        w.key("lambda").arr_open().num(s).num(0).num(0).num(0).num(s).arr_close();
        w.key("phi").num(0);
        w.obj_close();
    } else if (kind == "w") {
        const double s = 1.0 / std::sqrt(3.0);
        w.key("wlike").obj_open();
        w.key("a").num(s);
        w.key("b").num(s);
        w.key("c").num(s);
        w.key("q").num(0);
        w.obj_close();
    } else if (kind == "bell") {
        const double s = 1.0 / std::sqrt(2.0);
        w.key("two_qubit").arr_open();
        w.arr_open().num(s).num(0).arr_close();
        w.arr_open().num(0).num(0).arr_close();
        w.arr_open().num(0).num(0).arr_close();
        w.arr_open().num(s).num(0).arr_close();
        w.arr_close();
    } else {
        const grv::StateKind k = grv::parse_state_kind(kind);
        const auto st = grv::random_state(seed, k);
        if (k == grv::StateKind::Haar3) {
            w.key("amplitudes");
            put_pairs(std::get<grv::PureState3>(st).amp);
        } else if (k == grv::StateKind::Haar2) {
            w.key("two_qubit");
            put_pairs(std::get<grv::PureState2>(st).amp);
        } else if (k == grv::StateKind::AcinUniform) {
            const grv::AcinForm p = grv::random_acin(seed);
            w.key("acin").obj_open();
            w.key("lambda").arr_open();
            for (double l : p.lambda) w.num(l);
            w.arr_close();
            w.key("phi").num(p.phi);
            w.obj_close();
        } else {
            const grv::WLikeParams p = grv::random_wlike(seed);
            w.key("wlike").obj_open();
            w.key("a").num(p.a);
            w.key("b").num(p.b);
            w.key("c").num(p.c);
            w.key("q").num(p.q);
            w.obj_close();
        }
    }
    w.obj_close();
    return w.out();
}

int run_random(const RandomArgs& args) {
    if (args.n < 1) throw grv::ValidationError("random: n must be positive");
    if (args.kind != "ghz" && args.kind != "w" && args.kind != "bell")
        grv::parse_state_kind(args.kind);  // throws UnknownKindError early

    std::string out;
    for (int i = 0; i < args.n; ++i)
        out += state_line(args.kind, grv::derive_seed(args.seed, static_cast<std::uint64_t>(i))) +
               "\n";
    if (args.out.empty())
        std::cout << out;
    else
        grv::write_text_file(args.out, out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Groverian entanglement measure for two- and three-qubit pure states"};
    app.require_subcommand(1);

    AnalyzeArgs aa;
    CLI::App* analyze = app.add_subcommand("analyze", "Analyze a state file and print a report");
    analyze->add_option("--input", aa.input, "State file (JSON or JSON-lines)")->required();
    analyze->add_option("--format", aa.format, "Output format: json | text")
        ->check(CLI::IsMember({"json", "text"}));
    analyze->add_option("--seed", aa.seed, "Optimizer seed");
    analyze->add_option("--restarts", aa.restarts, "Optimizer restarts");
    analyze->add_option("--max-iters", aa.max_iters, "Optimizer iteration cap per restart");
    analyze->add_option("--tol", aa.tol, "Optimizer convergence tolerance");

    VerifyArgs va;
    CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--suite", va.suite, "Suite name")->required();
    verify->add_option("--n", va.n, "Cases per family (0 = suite default)");
    verify->add_option("--seed", va.seed, "Base seed");
    verify->add_option("--tol", va.tol, "Pass tolerance (0 = suite default)");
    verify->add_option("--restarts", va.restarts, "Optimizer restarts");

    RandomArgs ra;
    CLI::App* random = app.add_subcommand("random", "Write reproducible random state files");
    random->add_option("kind", ra.kind,
                       "haar3 | haar2 | acin-uniform | wlike-uniform | ghz | w | bell")
        ->required();
    random->add_option("--n", ra.n, "Number of states");
    random->add_option("--seed", ra.seed, "Base seed");
    random->add_option("--out", ra.out, "Output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*analyze) return run_analyze(aa);
        if (*verify) return run_verify(va);
        return run_random(ra);
    } catch (const grv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInvalid;
    }
}

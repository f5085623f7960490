#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "grv/io.hpp"

using Catch::Matchers::WithinAbs;
using namespace grv;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

std::string ghz_doc() {
    return std::string("{\"amplitudes\": [[") + format_double(kInvSqrt2) +
           ", 0], [0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[" + format_double(kInvSqrt2) + ", 0]]}";
}

std::string w_doc() {
    const std::string a = format_double(kInvSqrt3);
    return "{\"amplitudes\": [[0,0],[" + a + ",0],[" + a + ",0],[0,0],[" + a +
           ",0],[0,0],[0,0],[0,0]]}";
}

// Disambiguates string literals, which convert to both parse overloads.
StateFile parse(const std::string& text) { return parse_state_file(text); }

std::size_t key_pos(const std::string& json, const std::string& key) {
    const auto p = json.find("\"" + key + "\":");
    REQUIRE(p != std::string::npos);
    return p;
}

}  // namespace

TEST_CASE("double formatting survives a round-trip", "[io]") {
    for (double x : {0.5, 1.0 / 3.0, 4.0 / 9.0, 1e-17, -2.75, 0.0, 0.70710678118654757}) {
        const std::string s = format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(format_double(std::nan("")) == "null");
    CHECK(format_double(INFINITY) == "null");
}

TEST_CASE("state files parse into the declared kind", "[io]") {
    SECTION("amplitudes") {
        const StateFile sf = parse(ghz_doc());
        CHECK(sf.kind == "amplitudes");
        REQUIRE(sf.amplitudes.has_value());
        CHECK_THAT(norm(*sf.amplitudes), WithinAbs(1.0, 1e-12));
        CHECK_THAT(std::abs(sf.amplitudes->amp[7]), WithinAbs(kInvSqrt2, 1e-12));
    }
    SECTION("small norm drift is repaired silently") {
        const std::string doc =
            "{\"amplitudes\": [[0.70710678,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],"
            "[0.70710679,0]]}";
        const StateFile sf = parse_state_file(doc);
        CHECK_THAT(norm(*sf.amplitudes), WithinAbs(1.0, 1e-12));
    }
    SECTION("canonical coefficients") {
        const StateFile sf = parse(
            "{\"acin\": {\"lambda\": [0.6, 0.4, 0.4, 0.4, 0.4], \"phi\": 0.3}}");
        CHECK(sf.kind == "acin");
        REQUIRE(sf.acin.has_value());
        CHECK_THAT(sf.acin->lambda[0], WithinAbs(0.6, 1e-12));
        CHECK_THAT(sf.acin->phi, WithinAbs(0.3, 1e-15));
    }
    SECTION("four-term parameters") {
        const StateFile sf =
            parse("{\"wlike\": {\"a\": 0.5, \"b\": 0.5, \"c\": 0.5, \"q\": 0.5}}");
        CHECK(sf.kind == "wlike");
        REQUIRE(sf.wlike.has_value());
        CHECK_THAT(sf.wlike->q, WithinAbs(0.5, 1e-15));
    }
    SECTION("two-qubit amplitudes") {
        const StateFile sf = parse_state_file(
            std::string("{\"two_qubit\": [[") + format_double(kInvSqrt2) + ",0],[0,0],[0,0],[" +
            format_double(kInvSqrt2) + ",0]]}");
        CHECK(sf.kind == "two_qubit");
        REQUIRE(sf.two_qubit.has_value());
    }
}

TEST_CASE("malformed state files are rejected with the right error", "[io]") {
    CHECK_THROWS_AS(parse("not json at all"), ParseError);
    CHECK_THROWS_AS(parse("[1, 2]"), ParseError);
    CHECK_THROWS_AS(parse("{}"), ParseError);
    // two kinds at once
    CHECK_THROWS_AS(parse("{\"acin\": {\"lambda\": [1,0,0,0,0], \"phi\": 0}, "
                                     "\"wlike\": {\"a\":1,\"b\":0,\"c\":0,\"q\":0}}"),
                    ParseError);
    // wrong arity
    CHECK_THROWS_AS(parse("{\"amplitudes\": [[1,0],[0,0]]}"), ParseError);
    CHECK_THROWS_AS(parse("{\"amplitudes\": [1,0,0,0,0,0,0,0]}"), ParseError);
    CHECK_THROWS_AS(
        parse("{\"acin\": {\"lambda\": [1, 0, 0, 0], \"phi\": 0}}"), ParseError);
    CHECK_THROWS_AS(parse("{\"acin\": {\"lambda\": [1, 0, 0, 0, 0]}}"), ParseError);
    CHECK_THROWS_AS(parse("{\"wlike\": {\"a\": 1, \"b\": 0, \"c\": 0}}"), ParseError);
    // domain violations
    CHECK_THROWS_AS(
        parse("{\"acin\": {\"lambda\": [0.8, -0.6, 0, 0, 0], \"phi\": 0}}"),
        ValidationError);
    CHECK_THROWS_AS(
        parse("{\"acin\": {\"lambda\": [0.8, 0.6, 0, 0, 0], \"phi\": -0.5}}"),
        ValidationError);
    CHECK_THROWS_AS(
        parse("{\"wlike\": {\"a\": 0.5, \"b\": -0.5, \"c\": 0.5, \"q\": 0.5}}"),
        ValidationError);
    // norm outside the auto-renormalize window
    try {
        parse("{\"acin\": {\"lambda\": [0.8, 0, 0, 0, 0.4], \"phi\": 0}}");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("auto-renormalize window") != std::string::npos);
    }
}

TEST_CASE("analysis of the maximally entangled pair class", "[io]") {
    const Report r = analyze(parse(ghz_doc()));
    CHECK(r.input_kind == "amplitudes");
    CHECK(r.label == TypeLabel::T2b);
    REQUIRE(r.analytic.has_value());
    CHECK(r.p_max_source == "analytic");
    CHECK_THAT(r.p_max, WithinAbs(0.5, 1e-12));
    CHECK_THAT(r.g, WithinAbs(0.7071067811865476, 1e-12));
    REQUIRE(r.numeric.converged);
    CHECK_THAT(r.numeric.value, WithinAbs(0.5, 1e-10));
    CHECK_FALSE(r.two_qubit.has_value());
    bool saw_bloch = false, saw_quartic = false, saw_g = false;
    for (const auto& rel : r.relations) {
        CHECK(rel.residual < 1e-8);
        saw_bloch = saw_bloch || rel.id == "bloch-identities";
        saw_quartic = saw_quartic || rel.id == "lambda0-quartic";
        saw_g = saw_g || rel.id == "g-consistency";
    }
    CHECK(saw_bloch);
    CHECK(saw_quartic);
    CHECK(saw_g);
}

TEST_CASE("analysis of the symmetric three-term state", "[io]") {
    const Report r = analyze(parse(w_doc()));
    CHECK(r.label == TypeLabel::T3a);
    REQUIRE(r.analytic.has_value());
    CHECK(r.analytic->formula_id == "circumradius");
    CHECK_THAT(r.p_max, WithinAbs(4.0 / 9.0, 1e-9));
    CHECK_THAT(r.g, WithinAbs(std::sqrt(5.0) / 3.0, 1e-12));
    bool saw_family = false;
    for (const auto& rel : r.relations) {
        saw_family = saw_family || rel.id == "j5-tri-bell" || rel.id == "j5-circumradius";
        CHECK(rel.residual < 1e-8);
    }
    CHECK(saw_family);
}

TEST_CASE("analysis without a closed form falls back to the maximizer", "[io]") {
    const Report r = analyze(parse(
        "{\"acin\": {\"lambda\": [0.6, 0.4, 0.4, 0.4, 0.4], \"phi\": 0.3}}"));
    CHECK(r.label == TypeLabel::GENERIC);
    CHECK_FALSE(r.analytic.has_value());
    CHECK(r.analytic_reason == "not presented");
    CHECK(r.p_max_source == "numeric");
    REQUIRE(r.numeric.converged);
    CHECK(r.p_max == r.numeric.value);
    CHECK_THAT(r.g * r.g + r.p_max, WithinAbs(1.0, 1e-12));
}

TEST_CASE("analysis of four-term parameters", "[io]") {
    SECTION("equal parameters collapse to the maximally entangled class") {
        // a = b = c = q standard-forms to lambda = (1/sqrt2, 0, 0, 0, 1/sqrt2),
        // so the report uses that closed form instead of the candidate table.
        const Report r = analyze(
            parse("{\"wlike\": {\"a\": 0.5, \"b\": 0.5, \"c\": 0.5, \"q\": 0.5}}"));
        CHECK(r.label == TypeLabel::T2b);
        REQUIRE(r.analytic.has_value());
        CHECK(r.analytic->formula_id == "generalized-ghz");
        CHECK_THAT(r.p_max, WithinAbs(0.5, 1e-9));
        CHECK(r.analytic->candidates.empty());
    }
    SECTION("a generic profile goes through the candidate table") {
        const Report r = analyze(parse(
            "{\"wlike\": {\"a\": 0.5501926011214893, \"b\": 0.5201820956057717, "
            "\"c\": 0.5001750919286266, \"q\": 0.42014707722004635}}"));
        CHECK(r.label == TypeLabel::WLIKE);
        REQUIRE(r.analytic.has_value());
        CHECK(r.analytic->formula_id == "Q");
        REQUIRE(r.analytic->candidates.size() == 3);
        CHECK(r.analytic->candidates[0].id == "Q");
        CHECK(r.analytic->candidates[0].note == "matches numeric maximizer");
        CHECK(r.p_max_source == "analytic");
        CHECK(std::abs(r.p_max - r.numeric.value) < 1e-6);
        bool saw_folded = false;
        for (const auto& rel : r.relations) saw_folded = saw_folded || rel.id == "j5-sign-folded";
        CHECK(saw_folded);
    }
}

TEST_CASE("analysis of a two-qubit state adds the pair section", "[io]") {
    const Report r = analyze(parse_state_file(
        std::string("{\"two_qubit\": [[") + format_double(kInvSqrt2) + ",0],[0,0],[0,0],[" +
        format_double(kInvSqrt2) + ",0]]}"));
    REQUIRE(r.two_qubit.has_value());
    CHECK_THAT(r.two_qubit->schmidt0, WithinAbs(kInvSqrt2, 1e-12));
    CHECK_THAT(r.two_qubit->schmidt1, WithinAbs(kInvSqrt2, 1e-12));
    CHECK_THAT(r.two_qubit->j, WithinAbs(0.25, 1e-12));
    CHECK_THAT(r.two_qubit->pmax, WithinAbs(0.5, 1e-12));
    // The pair-invariant route agrees, up to its sqrt branch point at j = 1/4.
    CHECK_THAT(pmax_two_qubit(r.two_qubit->j), WithinAbs(r.two_qubit->pmax, 1e-7));
    CHECK(r.label == TypeLabel::T2a_J3);
    REQUIRE(r.analytic.has_value());
    CHECK_THAT(r.analytic->value, WithinAbs(0.5, 1e-10));
}

TEST_CASE("starved optimizer budget is reported, not hidden", "[io]") {
    OptimizerConfig cfg;
    cfg.max_iters = 1;
    const Report r = analyze(parse(w_doc()), cfg);
    CHECK_FALSE(r.numeric.converged);
    const std::string text = report_to_text(r);
    CHECK(text.find("converged = NO") != std::string::npos);
    const std::string json = report_to_json(r, false);
    CHECK(json.find("\"converged\":false") != std::string::npos);
}

TEST_CASE("JSON report is valid, ordered, and bit-faithful", "[io]") {
    const Report r = analyze(parse(ghz_doc()));
    for (bool pretty : {false, true}) {
        const std::string out = report_to_json(r, pretty);
        const nlohmann::json parsed = nlohmann::json::parse(out);
        CHECK(parsed["input"]["kind"] == "amplitudes");
        CHECK(parsed["type"] == "T2b");
        CHECK(parsed["analytic"]["available"] == true);
        CHECK(parsed["g"].get<double>() == r.g);
        CHECK(parsed["numeric"]["value"].get<double>() == r.numeric.value);
        CHECK(parsed["two_qubit"].is_null());
        CHECK(parsed["relations"].is_array());
        CHECK(parsed["relations"].size() == r.relations.size());
    }
    const std::string compact = report_to_json(r, false);
    std::size_t prev = 0;
    for (const char* key : {"input", "canonical_form", "invariants", "type", "analytic",
                            "numeric", "p_max", "p_max_source", "g", "relations", "two_qubit"}) {
        const std::size_t p = key_pos(compact, key);
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("JSON report for the unavailable analytic branch", "[io]") {
    const Report r = analyze(parse(
        "{\"acin\": {\"lambda\": [0.6, 0.4, 0.4, 0.4, 0.4], \"phi\": 0.3}}"));
    const nlohmann::json parsed = nlohmann::json::parse(report_to_json(r, true));
    CHECK(parsed["analytic"]["available"] == false);
    CHECK(parsed["analytic"]["value"].is_null());
    CHECK(parsed["analytic"]["reason"] == "unavailable: not presented");
    CHECK(parsed["analytic"]["candidates"].empty());
    CHECK(parsed["numeric"]["converged"] == true);
}

TEST_CASE("text report carries the full story", "[io]") {
    const Report r = analyze(parse(
        "{\"wlike\": {\"a\": 0.5501926011214893, \"b\": 0.5201820956057717, "
        "\"c\": 0.5001750919286266, \"q\": 0.42014707722004635}}"));
    const std::string text = report_to_text(r);
    CHECK(text.find("WLIKE") != std::string::npos);
    CHECK(text.find("candidate Q:") != std::string::npos);
    CHECK(text.find("candidate CQ:") != std::string::npos);
    CHECK(text.find("candidate L:") != std::string::npos);
    CHECK(text.find("matches numeric maximizer") != std::string::npos);
    CHECK(text.find("relation g-consistency:") != std::string::npos);
    CHECK(text.find(format_double(r.g)) != std::string::npos);
}

TEST_CASE("text files round-trip and failures surface as IoError", "[io]") {
    const std::string path = "grv_io_test_scratch.txt";
    const std::string payload = "line one\nline two\twith tab\n";
    write_text_file(path, payload);
    CHECK(read_text_file(path) == payload);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file("definitely/not/a/real/path.json"), IoError);
    CHECK_THROWS_AS(write_text_file("no_such_dir/x/y.txt", "boom"), IoError);
}

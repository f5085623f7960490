#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "grv/analytic.hpp"
#include "grv/canonical.hpp"
#include "grv/errors.hpp"
#include "grv/forms.hpp"
#include "grv/invariants.hpp"
#include "grv/numeric.hpp"
#include "grv/state.hpp"

namespace grv {

// ---------------------------------------------------------------------------
// Deterministic JSON output: fixed key order, doubles at 17 significant digits.
// ---------------------------------------------------------------------------

inline std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", x);
    return b;
}

class JsonWriter {
public:
    explicit JsonWriter(bool pretty) : pretty_(pretty) {}

    JsonWriter& obj_open() { return open('{', true); }
    JsonWriter& obj_close() { return close('}'); }
    JsonWriter& arr_open() { return open('[', false); }
    JsonWriter& arr_close() { return close(']'); }

    JsonWriter& key(std::string_view k) {
        separate();
        escape(k);
        buf_ += pretty_ ? "\": " : "\":";
        pending_value_ = true;
        return *this;
    }

    JsonWriter& str(std::string_view v) {
        separate();
        escape(v);
        buf_ += '"';
        return *this;
    }
    JsonWriter& num(double v) { return raw(format_double(v)); }
    JsonWriter& integer(long long v) { return raw(std::to_string(v)); }
    JsonWriter& boolean(bool v) { return raw(v ? "true" : "false"); }
    JsonWriter& null() { return raw("null"); }

    // Pre-serialized JSON fragment (assumed valid).
    JsonWriter& raw(std::string_view v) {
        separate();
        buf_.pop_back();  // separate() opened a string quote we don't want
        buf_ += v;
        return *this;
    }

    const std::string& out() const { return buf_; }

private:
    JsonWriter& open(char c, bool) {
        separate();
        buf_.pop_back();
        buf_ += c;
        depth_++;
        counts_.push_back(0);
        return *this;
    }
    JsonWriter& close(char c) {
        depth_--;
        const bool had_items = counts_.back() > 0;
        counts_.pop_back();
        if (pretty_ && had_items) {
            buf_ += '\n';
            buf_.append(static_cast<std::size_t>(2 * depth_), ' ');
        }
        buf_ += c;
        return *this;
    }
    // Emits any needed comma/indent and the opening quote of a string token;
    // non-string emitters strip that quote again.
    void separate() {
        if (pending_value_) {
            pending_value_ = false;
        } else {
            if (!counts_.empty()) {
                if (counts_.back() > 0) buf_ += ',';
                counts_.back()++;
                if (pretty_) {
                    buf_ += '\n';
                    buf_.append(static_cast<std::size_t>(2 * depth_), ' ');
                }
            }
        }
        buf_ += '"';
    }
    void escape(std::string_view s) {
        for (char c : s) {
            switch (c) {
                case '"': buf_ += "\\\""; break;
                case '\\': buf_ += "\\\\"; break;
                case '\n': buf_ += "\\n"; break;
                case '\t': buf_ += "\\t"; break;
                case '\r': buf_ += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char b[8];
                        std::snprintf(b, sizeof b, "\\u%04x", c);
                        buf_ += b;
                    } else {
                        buf_ += c;
                    }
            }
        }
    }

    std::string buf_;
    bool pretty_;
    bool pending_value_ = false;
    int depth_ = 0;
    std::vector<int> counts_;
};

// ---------------------------------------------------------------------------
// State files
// ---------------------------------------------------------------------------

struct StateFile {
    std::string kind;  // "amplitudes" | "acin" | "wlike" | "two_qubit"
    nlohmann::json echo;
    std::optional<PureState3> amplitudes;
    std::optional<AcinForm> acin;
    std::optional<WLikeParams> wlike;
    std::optional<PureState2> two_qubit;
};

namespace detail {

// Keep exactly-normalized input untouched, renormalize small drift, reject the rest.
inline double renorm_factor(double norm, const char* what) {
    if (std::abs(norm - 1.0) <= 1e-12) return 1.0;
    if (std::abs(norm - 1.0) <= 1e-6) return 1.0 / norm;
    throw ValidationError(std::string(what) +
                          ": norm deviates from 1 by more than 1e-6 (auto-renormalize window)");
}

inline double json_number(const nlohmann::json& j, const char* what) {
    if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
    return j.get<double>();
}

template <std::size_t N>
inline std::array<cd, N> parse_pairs(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != N)
        throw ParseError(std::string(what) + ": expected an array of " + std::to_string(N) +
                         " [re, im] pairs");
    std::array<cd, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        const auto& p = j[i];
        if (!p.is_array() || p.size() != 2)
            throw ParseError(std::string(what) + ": entry " + std::to_string(i) +
                             " is not an [re, im] pair");
        out[i] = cd(json_number(p[0], what), json_number(p[1], what));
    }
    return out;
}

}  // namespace detail

inline StateFile parse_state_file(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ParseError("state file: expected a JSON object");
    const int present = static_cast<int>(doc.contains("amplitudes")) +
                        static_cast<int>(doc.contains("acin")) +
                        static_cast<int>(doc.contains("wlike")) +
                        static_cast<int>(doc.contains("two_qubit"));
    if (present != 1)
        throw ParseError(
            "state file: exactly one of amplitudes | acin | wlike | two_qubit is required");

    StateFile sf;
    sf.echo = doc;
    if (doc.contains("amplitudes")) {
        sf.kind = "amplitudes";
        PureState3 s;
        s.amp = detail::parse_pairs<8>(doc["amplitudes"], "amplitudes");
        const double f = detail::renorm_factor(norm(s), "amplitudes");
        for (auto& z : s.amp) z *= f;
        sf.amplitudes = s;
    } else if (doc.contains("acin")) {
        sf.kind = "acin";
        const auto& a = doc["acin"];
        if (!a.is_object() || !a.contains("lambda") || !a.contains("phi"))
            throw ParseError("acin: expected {lambda: [5 reals], phi: real}");
        const auto& lam = a["lambda"];
        if (!lam.is_array() || lam.size() != 5)
            throw ParseError("acin.lambda: expected 5 reals");
        AcinForm p;
        double n2 = 0.0;
        for (int i = 0; i < 5; ++i) {
            p.lambda[static_cast<std::size_t>(i)] = detail::json_number(lam[static_cast<std::size_t>(i)], "acin.lambda");
            if (p.lambda[static_cast<std::size_t>(i)] < 0.0)
                throw ValidationError("acin.lambda: components must be nonnegative");
            n2 += p.lambda[static_cast<std::size_t>(i)] * p.lambda[static_cast<std::size_t>(i)];
        }
        p.phi = detail::json_number(a["phi"], "acin.phi");
        const double f = detail::renorm_factor(std::sqrt(n2), "acin.lambda");
        for (auto& l : p.lambda) l *= f;
        validate(p);  // phi range and final norm
        sf.acin = p;
    } else if (doc.contains("wlike")) {
        sf.kind = "wlike";
        const auto& w = doc["wlike"];
        if (!w.is_object() || !w.contains("a") || !w.contains("b") || !w.contains("c") ||
            !w.contains("q"))
            throw ParseError("wlike: expected {a, b, c, q}");
        WLikeParams p;
        p.a = detail::json_number(w["a"], "wlike.a");
        p.b = detail::json_number(w["b"], "wlike.b");
        p.c = detail::json_number(w["c"], "wlike.c");
        p.q = detail::json_number(w["q"], "wlike.q");
        if (p.a < 0 || p.b < 0 || p.c < 0 || p.q < 0)
            throw ValidationError("wlike: coefficients must be nonnegative");
        const double f =
            detail::renorm_factor(std::sqrt(p.a * p.a + p.b * p.b + p.c * p.c + p.q * p.q), "wlike");
        p.a *= f;
        p.b *= f;
        p.c *= f;
        p.q *= f;
        validate(p);
        sf.wlike = p;
    } else {
        sf.kind = "two_qubit";
        PureState2 s;
        s.amp = detail::parse_pairs<4>(doc["two_qubit"], "two_qubit");
        const double f = detail::renorm_factor(norm(s), "two_qubit");
        for (auto& z : s.amp) z *= f;
        sf.two_qubit = s;
    }
    return sf;
}

inline StateFile parse_state_file(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("state file: invalid JSON: ") + e.what());
    }
    return parse_state_file(doc);
}

// ---------------------------------------------------------------------------
// Analysis report
// ---------------------------------------------------------------------------

struct TwoQubitSection {
    double schmidt0 = 1.0;
    double schmidt1 = 0.0;
    double j = 0.0;
    double pmax = 1.0;
};

struct Report {
    std::string input_kind;
    nlohmann::json input_echo;
    AcinForm canonical;
    Invariants inv;
    TypeLabel label = TypeLabel::GENERIC;
    std::optional<AnalyticPmax> analytic;
    std::string analytic_reason;  // set when analytic is absent
    PmaxResult numeric;
    int restarts = 0;
    double p_max = 1.0;
    std::string p_max_source;  // "analytic" | "numeric"
    double g = 0.0;
    std::vector<RelationResidual> relations;
    std::optional<TwoQubitSection> two_qubit;
};

namespace detail {

inline double trace_mmt(const Mat3& m) {
    double s = 0.0;
    for (const auto& row : m)
        for (double x : row) s += x * x;
    return s;
}

// Worst residual of the eight quadratic identities linking the one- and
// two-site correlation tensors to the polynomial invariants.
inline double bloch_identity_residual(const PureState3& st, const Invariants& j) {
    const BlochForm3 b = bloch3(st);
    auto sq = [](const Vec3& v) { return dot3(v, v); };
    double gg = 0.0;
    for (const auto& plane : b.g)
        for (const auto& row : plane)
            for (double x : row) gg += x * x;
    double hv = 0.0;
    for (int al = 0; al < 3; ++al)
        for (int be = 0; be < 3; ++be)
            hv += b.h3[static_cast<std::size_t>(al)][static_cast<std::size_t>(be)] *
                  b.v1[static_cast<std::size_t>(al)] * b.v2[static_cast<std::size_t>(be)];

    double worst = 0.0;
    auto upd = [&worst](double lhs, double rhs) { worst = std::max(worst, std::abs(lhs - rhs)); };
    upd(sq(b.v1), 1.0 - 4.0 * (j.j2 + j.j3 + j.j4));
    upd(sq(b.v2), 1.0 - 4.0 * (j.j1 + j.j3 + j.j4));
    upd(sq(b.v3), 1.0 - 4.0 * (j.j1 + j.j2 + j.j4));
    upd(trace_mmt(b.h1), 1.0 + 4.0 * (2.0 * j.j1 - j.j2 - j.j3));
    upd(trace_mmt(b.h2), 1.0 - 4.0 * (j.j1 - 2.0 * j.j2 + j.j3));
    upd(trace_mmt(b.h3), 1.0 - 4.0 * (j.j1 + j.j2 - 2.0 * j.j3));
    upd(gg, 1.0 + 4.0 * (2.0 * j.j1 + 2.0 * j.j2 + 2.0 * j.j3 + 3.0 * j.j4));
    upd(hv, 1.0 - 4.0 * (j.j1 + j.j2 + j.j3 + j.j4 - j.j5));
    return worst;
}

inline double quartic_residual(const Invariants& j, double y) {
    const double c = j.j2 * j.j3 + j.j2 * j.j4 + j.j3 * j.j4 + j.j4 * j.j4;
    return std::abs((j.j1 + j.j4) * y * y - (j.j5 + j.j4) * y + c);
}

}  // namespace detail

inline Report analyze(const StateFile& sf, const OptimizerConfig& cfg = {}) {
    validate(cfg);
    Report r;
    r.input_kind = sf.kind;
    r.input_echo = sf.echo;
    r.restarts = cfg.restarts;

    PureState3 st;
    if (sf.kind == "acin") {
        st = from_acin(*sf.acin);
        r.canonical = *sf.acin;
    } else if (sf.kind == "wlike") {
        st = wlike_state(*sf.wlike);
        try {
            r.canonical = wlike_standard_form(*sf.wlike);
        } catch (const DegenerateTransform&) {
            r.canonical = acin_decompose(st).form;
        }
    } else if (sf.kind == "two_qubit") {
        st = embed_two_qubit(*sf.two_qubit);
        r.canonical = acin_decompose(st).form;
        const SchmidtForm2 sch = schmidt2(*sf.two_qubit);
        TwoQubitSection tq;
        tq.schmidt0 = sch.lambda0;
        tq.schmidt1 = sch.lambda1;
        tq.j = j_two_qubit(*sf.two_qubit);
        // The squared top Schmidt coefficient is the nearest-product overlap for a
        // pair; the equivalent expression through the pair invariant loses half the
        // significant digits near j = 1/4, so the Schmidt route is the value of record.
        tq.pmax = sch.lambda0 * sch.lambda0;
        r.two_qubit = tq;
    } else {
        st = *sf.amplitudes;
        r.canonical = acin_decompose(st).form;
    }

    r.inv = invariants_from_acin(r.canonical);
    const TypeLabel base = classify(r.canonical);

    const bool base_has_form = base == TypeLabel::T1 || base == TypeLabel::T2a_J1 ||
                               base == TypeLabel::T2a_J2 || base == TypeLabel::T2a_J3 ||
                               base == TypeLabel::T2b || base == TypeLabel::T3a ||
                               base == TypeLabel::T3b_12 || base == TypeLabel::T3b_13 ||
                               base == TypeLabel::T3b_23;
    if (sf.kind == "wlike" && !base_has_form) {
        r.label = TypeLabel::WLIKE;
        try {
            r.analytic = pmax_wlike(*sf.wlike, cfg);
        } catch (const NoCandidateMatches& e) {
            r.analytic_reason = e.what();
        }
    } else {
        const AnalyticOutcome ao = pmax_analytic(r.canonical);
        r.label = ao.label;
        if (ao.pmax)
            r.analytic = ao.pmax;
        else
            r.analytic_reason = ao.unavailable_reason;
    }

    r.numeric = pmax_numeric_2site(st, cfg);

    if (r.analytic) {
        r.p_max = r.analytic->value;
        r.p_max_source = "analytic";
    } else {
        r.p_max = r.numeric.value;
        r.p_max_source = "numeric";
    }
    r.g = groverian_measure(r.p_max);

    const Invariants& j = r.inv;
    r.relations.push_back({"bloch-identities", detail::bloch_identity_residual(st, j)});
    r.relations.push_back(
        {"lambda0-quartic", detail::quartic_residual(j, r.canonical.lambda[0] * r.canonical.lambda[0])});
    r.relations.push_back({"g-consistency", std::abs(r.g * r.g + r.p_max - 1.0)});
    const RelationReport family_rel = check_relations(j, to_string(r.label));
    for (const RelationResidual& rr : family_rel.residuals) r.relations.push_back(rr);
    return r;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

inline std::string report_to_json(const Report& r, bool pretty) {
    JsonWriter w(pretty);
    w.obj_open();
    w.key("input").obj_open();
    w.key("kind").str(r.input_kind);
    w.key("data").raw(r.input_echo.dump());
    w.obj_close();

    w.key("canonical_form").obj_open();
    w.key("lambda").arr_open();
    for (double l : r.canonical.lambda) w.num(l);
    w.arr_close();
    w.key("phi").num(r.canonical.phi);
    w.obj_close();

    w.key("invariants").obj_open();
    w.key("j1").num(r.inv.j1);
    w.key("j2").num(r.inv.j2);
    w.key("j3").num(r.inv.j3);
    w.key("j4").num(r.inv.j4);
    w.key("j5").num(r.inv.j5);
    w.obj_close();

    w.key("type").str(to_string(r.label));

    w.key("analytic").obj_open();
    w.key("available").boolean(r.analytic.has_value());
    if (r.analytic) {
        w.key("value").num(r.analytic->value);
        w.key("formula").str(r.analytic->formula_id);
        w.key("reason").null();
    } else {
        w.key("value").null();
        w.key("formula").null();
        w.key("reason").str(std::string("unavailable: ") +
                            (r.analytic_reason.empty() ? "not presented" : r.analytic_reason));
    }
    w.key("candidates").arr_open();
    if (r.analytic) {
        for (const auto& c : r.analytic->candidates) {
            w.obj_open();
            w.key("id").str(c.id);
            if (c.value)
                w.key("value").num(*c.value);
            else
                w.key("value").null();
            w.key("note").str(c.note);
            w.obj_close();
        }
    }
    w.arr_close();
    w.obj_close();

    w.key("numeric").obj_open();
    w.key("value").num(r.numeric.value);
    w.key("converged").boolean(r.numeric.converged);
    w.key("multiplier_residual").num(r.numeric.multiplier_residual);
    w.key("iterations").integer(r.numeric.iterations);
    w.key("restarts").integer(r.restarts);
    w.obj_close();

    w.key("p_max").num(r.p_max);
    w.key("p_max_source").str(r.p_max_source);
    w.key("g").num(r.g);

    w.key("relations").arr_open();
    for (const auto& rel : r.relations) {
        w.obj_open();
        w.key("id").str(rel.id);
        w.key("residual").num(rel.residual);
        w.obj_close();
    }
    w.arr_close();

    w.key("two_qubit");
    if (r.two_qubit) {
        w.obj_open();
        w.key("schmidt").arr_open().num(r.two_qubit->schmidt0).num(r.two_qubit->schmidt1).arr_close();
        w.key("j").num(r.two_qubit->j);
        w.key("p_max").num(r.two_qubit->pmax);
        w.obj_close();
    } else {
        w.null();
    }
    w.obj_close();
    return w.out();
}

inline std::string report_to_text(const Report& r) {
    std::ostringstream os;
    auto line = [&os](const std::string& k, const std::string& v) {
        os << k << ' ';
        for (std::size_t i = k.size() + 1; i < 28; ++i) os << ' ';
        os << v << '\n';
    };
    line("input kind:", r.input_kind);
    {
        std::string lam = "[";
        for (int i = 0; i < 5; ++i)
            lam += (i ? ", " : "") + format_double(r.canonical.lambda[static_cast<std::size_t>(i)]);
        lam += "]  phi = " + format_double(r.canonical.phi);
        line("canonical form:", lam);
    }
    line("invariants:", "J1 = " + format_double(r.inv.j1) + ", J2 = " + format_double(r.inv.j2) +
                            ", J3 = " + format_double(r.inv.j3) + ", J4 = " + format_double(r.inv.j4) +
                            ", J5 = " + format_double(r.inv.j5));
    line("type:", to_string(r.label));
    if (r.analytic) {
        line("analytic p_max:", format_double(r.analytic->value) + "  (" + r.analytic->formula_id + ")");
        for (const auto& c : r.analytic->candidates)
            line("  candidate " + c.id + ":",
                 (c.value ? format_double(*c.value) : std::string("-")) +
                     (c.note.empty() ? "" : "  [" + c.note + "]"));
    } else {
        line("analytic p_max:",
             "unavailable: " + (r.analytic_reason.empty() ? std::string("not presented") : r.analytic_reason));
    }
    line("numeric p_max:", format_double(r.numeric.value) + "  (converged = " +
                               (r.numeric.converged ? "yes" : "NO") +
                               ", residual = " + format_double(r.numeric.multiplier_residual) +
                               ", iterations = " + std::to_string(r.numeric.iterations) +
                               ", restarts = " + std::to_string(r.restarts) + ")");
    line("p_max:", format_double(r.p_max) + "  (" + r.p_max_source + ")");
    line("g:", format_double(r.g));
    for (const auto& rel : r.relations)
        line("relation " + rel.id + ":", format_double(rel.residual));
    if (r.two_qubit) {
        line("two-qubit schmidt:", "[" + format_double(r.two_qubit->schmidt0) + ", " +
                                       format_double(r.two_qubit->schmidt1) + "]");
        line("two-qubit J:", format_double(r.two_qubit->j));
        line("two-qubit p_max:", format_double(r.two_qubit->pmax));
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failure: " + path);
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("write failure: " + path);
}

}  // namespace grv

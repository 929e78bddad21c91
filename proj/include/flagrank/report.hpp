#pragma once

#include <string>

#include <json.hpp>

#include "flagrank/bounds.hpp"
#include "flagrank/combinatorics.hpp"
#include "flagrank/secant.hpp"
#include "flagrank/shape.hpp"
#include "flagrank/spans.hpp"

namespace flagrank {

// ------------------------------------------------------------------------
// JSON records.  nlohmann::json objects keep their keys sorted, every value
// here is an integer, boolean or exact string (rationals as "p/q"), and no
// machine- or time-dependent data enters, so serialization is byte-stable
// for a given input and (prime, seed).
// ------------------------------------------------------------------------

using json = nlohmann::json;

inline std::string rat_to_string(const BigRat& q) { return q.str(); }

inline json dim_report(const FlagShape& s) {
    json j;
    j["shape"] = shape_to_string(s);
    j["mode"] = s.mode == Mode::Product ? "product" : "flag";
    j["dim"] = flag_dim(s);
    j["ambient_projective"] = to_u64_checked(ambient_affine(s) - 1, "ambient");
    j["span_projective"] = to_u64_checked(span_dim_affine(s) - 1, "span");
    j["alpha"] = s.alpha();
    j["diameter"] = s.diameter();
    return j;
}

inline json secant_report(const FlagShape& s, const SecantResult& r) {
    json j;
    j["shape"] = shape_to_string(s);
    j["h"] = r.h;
    j["rank_affine"] = r.rank_affine;
    j["rank_projective"] = r.rank_projective();
    j["expected_affine"] = r.expected_affine;
    j["expected_projective"] = r.expected_projective();
    j["span_affine"] = r.span_affine;
    j["defect"] = r.defect();
    j["fills"] = r.fills();
    j["certified"] = r.certified;
    j["sampled"] = r.sampled;
    j["prime"] = r.prime;
    j["prime2"] = r.prime2;
    j["seed"] = r.seed;
    j["trials"] = r.trials;
    return j;
}

inline json bound_report_json(const BoundReport& r) {
    json j;
    j["regime"] = regime_name(r.regime);
    j["applicable"] = r.applicable;
    j["h_max"] = r.h_max;
    if (r.alpha >= 0) j["alpha"] = r.alpha;
    if (r.s >= 0) j["s"] = r.s;
    if (r.regime == Regime::ProductSmallN && r.applicable) {
        j["s_prime"] = r.s_prime;
        j["h_alpha_s_prime"] = r.h_alpha_s_prime;
    }
    if (r.regime == Regime::ProductLargeN || r.regime == Regime::ProductSmallN ||
        r.regime == Regime::FlagLargeN || r.regime == Regime::FlagSmallN)
        j["h_alpha_s"] = r.h_alpha_s;
    if (r.l >= 0) j["l"] = r.l;
    if (r.regime == Regime::ReducedFlag || r.regime == Regime::Asymptotic ||
        r.regime == Regime::Identifiability)
        j["bound_value"] = rat_to_string(r.bound_value);
    if (r.regime == Regime::Identifiability) j["literal_gate"] = r.literal_gate;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

// One record per regime relevant to the shape, keyed by bound name.
inline json bounds_report(const FlagShape& s, bool literal_gate = false) {
    json j;
    j["shape"] = shape_to_string(s);
    BoundReport main = best_defectivity_bound(s);
    const char* key = s.mode == Mode::Product ? "product_bound"
                      : main.regime == Regime::ReducedFlag ? "reduced_flag_bound"
                                                           : "flag_bound";
    j[key] = bound_report_json(main);
    j["asymptotic"] = bound_report_json(asymptotic_bound(s));
    j["identifiability"] = bound_report_json(identifiability_bound(s, literal_gate));
    return j;
}

inline json chordal_report_json(const ChordalReport& r) {
    json j;
    j["n"] = r.n;
    j["form_vanishes_on_variety"] = r.form_vanishes_on_variety;
    j["spans_hyperplane"] = r.spans_hyperplane;
    j["form_nonzero_on_ambient"] = r.form_nonzero_on_ambient;
    j["two_secant_defect"] = r.two_secant_defect;
    j["certified"] = r.certified;
    return j;
}

// Canonical textual forms shared by the CLI and the cache.
inline std::string to_canonical_text(const json& j) { return j.dump(2) + "\n"; }
inline std::string to_cache_line(const json& j) { return j.dump(); }

// Flat key,value CSV derived from the same record (arrays/objects one level
// deep are flattened with '.'-joined keys).
inline void csv_flatten(const json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            csv_flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            csv_flatten(j[i], prefix + "." + std::to_string(i), out);
    } else {
        out += prefix;
        out += ',';
        if (j.is_string()) out += j.get<std::string>();
        else out += j.dump();
        out += '\n';
    }
}

inline std::string to_csv(const json& j) {
    std::string out = "key,value\n";
    csv_flatten(j, "", out);
    return out;
}

} // namespace flagrank

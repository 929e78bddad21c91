// flagrank: exact secant, osculating and bound computations for flag
// varieties and products of Grassmannians in their Pluecker-Segre
// embeddings.  All arithmetic is exact (multi-precision rationals and
// random evaluation over large primes with two-prime certification);
// every run is deterministic given (--prime, --seed).

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flagrank/flagrank.hpp"

namespace {

using flagrank::json;

// ---- output helpers -----------------------------------------------------

void render_human(const json& j, std::ostream& os, int indent = 0) {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_object() || it.value().is_array()) {
                os << pad << it.key() << ":\n";
                render_human(it.value(), os, indent + 2);
            } else if (it.value().is_string()) {
                os << pad << it.key() << ": " << it.value().get<std::string>() << "\n";
            } else {
                os << pad << it.key() << ": " << it.value().dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const json& e : j) {
            render_human(e, os, indent);
            if (&e != &j.back()) os << pad << "-\n";
        }
    } else {
        os << pad << j.dump() << "\n";
    }
}

void emit(const json& record, bool as_json, bool as_csv) {
    if (as_json) std::cout << flagrank::to_canonical_text(record);
    else if (as_csv) std::cout << flagrank::to_csv(record);
    else render_human(record, std::cout);
}

// ---- flag plumbing ------------------------------------------------------

struct CommonFlags {
    std::uint64_t prime = 0;
    std::uint64_t seed = 0;
    int trials = 0;
    bool force = false;
    bool as_json = false;
    bool as_csv = false;
};

void add_engine_flags(CLI::App* cmd, CommonFlags& cf, const flagrank::EngineOptions& defaults) {
    cf.prime = defaults.prime;
    cf.seed = defaults.seed;
    cf.trials = defaults.trials;
    cf.force = defaults.force;
    cmd->add_option("--prime", cf.prime, "evaluation prime (must be prime, < 2^62)")
        ->capture_default_str();
    cmd->add_option("--seed", cf.seed, "random seed")->capture_default_str();
    cmd->add_option("--trials", cf.trials, "samples per prime, best rank kept")
        ->capture_default_str();
    cmd->add_flag("--force", cf.force, "lift the policy size caps");
}

void add_output_flags(CLI::App* cmd, CommonFlags& cf) {
    cmd->add_flag("--json", cf.as_json, "machine-readable JSON record");
    cmd->add_flag("--csv", cf.as_csv, "flat key,value CSV derived from the record");
}

flagrank::EngineOptions engine_from(const CommonFlags& cf, const flagrank::EngineOptions& base) {
    flagrank::EngineOptions o = base;
    o.prime = cf.prime;
    o.seed = cf.seed;
    o.trials = cf.trials;
    o.force = cf.force;
    if (o.trials < 1) throw flagrank::UsageError("--trials must be at least 1");
    if (!flagrank::is_prime_u64(o.prime) || o.prime >= flagrank::kMaxPrime)
        throw flagrank::UsageError("--prime must be a prime below 2^62");
    return o;
}

// Shape lists carry commas inside each shape ("G:0,1;3"), so a comma only
// separates entries once the current entry has passed its ';n' part.
std::vector<flagrank::FlagShape> split_shapes(const std::string& text) {
    std::vector<flagrank::FlagShape> out;
    std::string cur;
    bool seen_semi = false;
    for (char c : text) {
        if (c == ',' && seen_semi) {
            out.push_back(flagrank::parse_shape(cur));
            cur.clear();
            seen_semi = false;
        } else {
            cur += c;
            if (c == ';') seen_semi = true;
        }
    }
    if (!cur.empty()) out.push_back(flagrank::parse_shape(cur));
    return out;
}

// "45", "45s" or "3m"; converted to the deterministic work allowance
// (~2e7 units per desktop-second) so repeated runs skip identical checks.
std::uint64_t parse_budget(const std::string& text) {
    if (text.empty()) return 0;
    std::string num = text;
    std::uint64_t scale = 1;
    if (num.back() == 's') num.pop_back();
    else if (num.back() == 'm') {
        num.pop_back();
        scale = 60;
    }
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(num, &used);
        if (used != num.size() || num.empty()) throw std::invalid_argument("budget");
        return static_cast<std::uint64_t>(v) * scale * 20000000ull;
    } catch (const std::exception&) {
        throw flagrank::UsageError("--budget: expected seconds like '60', '60s' or '2m'");
    }
}

// ---- commands -----------------------------------------------------------

int cmd_dim(const std::string& shape_text, const CommonFlags& cf) {
    flagrank::FlagShape s = flagrank::parse_shape(shape_text);
    emit(flagrank::dim_report(s), cf.as_json, cf.as_csv);
    return 0;
}

int cmd_secant(const std::string& shape_text, std::uint64_t h, const CommonFlags& cf,
               const flagrank::EngineOptions& base) {
    if (h < 1) throw flagrank::UsageError("--h must be at least 1");
    flagrank::FlagShape s = flagrank::parse_shape(shape_text);
    flagrank::EngineOptions o = engine_from(cf, base);
    flagrank::RankCache cache(o.cache_path);
    emit(flagrank::cached_secant_record(cache, s, h, o), cf.as_json, cf.as_csv);
    return 0;
}

int cmd_bounds(const std::string& shape_text, bool literal, const CommonFlags& cf) {
    flagrank::FlagShape s = flagrank::parse_shape(shape_text);
    emit(flagrank::bounds_report(s, literal), cf.as_json, cf.as_csv);
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& shapes_text, int nmax,
               const std::string& budget_text, int jobs, const CommonFlags& cf,
               const flagrank::EngineOptions& base) {
    flagrank::VerifyOptions vo;
    vo.engine = engine_from(cf, base);
    vo.nmax = nmax;
    vo.budget_units = parse_budget(budget_text);
    if (!shapes_text.empty()) vo.shapes = split_shapes(shapes_text);
    if (jobs < 1) throw flagrank::UsageError("--jobs must be at least 1");
    vo.jobs = jobs;
    flagrank::SuiteReport rep = flagrank::run_suite(suite, vo);
    std::cout << flagrank::to_canonical_text(rep.to_json());
    std::cerr << "suite " << suite << ": " << (rep.all_pass() ? "PASS" : "FAIL") << " ("
              << rep.checks.size() << " checks)\n";
    return rep.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        flagrank::EngineOptions base = flagrank::options_from_env();

        CLI::App app{"exact secant/osculating/bound computations for flag varieties "
                     "and products of Grassmannians"};
        app.require_subcommand(1);
        // --h is a documented option of `secant`, so help lives on --help only.
        app.set_help_flag("--help", "print help and exit");

        std::string shape_text, suite, shapes_text, budget_text;
        std::uint64_t h = 0;
        bool literal = false;
        int nmax = 4, jobs = 1;
        CommonFlags cf_dim, cf_sec, cf_bounds, cf_verify;

        CLI::App* dim = app.add_subcommand("dim", "dimension, ambient and span of a shape");
        dim->set_help_flag("--help", "print help and exit");
        dim->add_option("shape", shape_text, "[G:]k1,...,kr;n")->required();
        add_output_flags(dim, cf_dim);

        CLI::App* sec = app.add_subcommand("secant", "Terracini rank and defect of the h-secant");
        sec->set_help_flag("--help", "print help and exit");
        sec->add_option("shape", shape_text, "[G:]k1,...,kr;n")->required();
        sec->add_option("--h", h, "number of general points")->required();
        add_engine_flags(sec, cf_sec, base);
        add_output_flags(sec, cf_sec);

        CLI::App* bnd = app.add_subcommand("bounds", "closed-form non-defectivity and "
                                                     "identifiability bounds");
        bnd->set_help_flag("--help", "print help and exit");
        bnd->add_option("shape", shape_text, "[G:]k1,...,kr;n")->required();
        bnd->add_flag("--corid-literal", literal,
                      "product shapes: gate identifiability on the literal product of "
                      "factor dimensions");
        add_output_flags(bnd, cf_bounds);

        CLI::App* ver = app.add_subcommand("verify", "run a built-in invariant suite "
                                                     "(osc|wb|flat|proj|chordal|cross)");
        ver->set_help_flag("--help", "print help and exit");
        ver->add_option("suite", suite, "osc|wb|flat|proj|chordal|cross")->required();
        ver->add_option("--shapes", shapes_text, "comma-joined shapes overriding the corpus");
        ver->add_option("--nmax", nmax, "chordal suite: largest n")->capture_default_str();
        ver->add_option("--budget", budget_text, "deterministic work budget, e.g. 60s");
        ver->add_option("--jobs", jobs, "worker threads")->capture_default_str();
        add_engine_flags(ver, cf_verify, base);

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            int code = app.exit(e);
            return code == 0 ? 0 : 2; // usage errors map to exit 2
        }

        if (dim->parsed()) return cmd_dim(shape_text, cf_dim);
        if (sec->parsed()) return cmd_secant(shape_text, h, cf_sec, base);
        if (bnd->parsed()) return cmd_bounds(shape_text, literal, cf_bounds);
        if (ver->parsed())
            return cmd_verify(suite, shapes_text, nmax, budget_text, jobs, cf_verify, base);
        return 2;
    } catch (const flagrank::ShapeError& e) {
        std::cerr << "shape error: " << e.what();
        if (e.position != std::string::npos) std::cerr << " (at position " << e.position << ")";
        std::cerr << "\n";
        return 2;
    } catch (const flagrank::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const flagrank::CapError& e) {
        std::cerr << "cap exceeded: " << e.what() << " (use --force to lift policy caps)\n";
        return 3;
    } catch (const flagrank::InconsistencyError& e) {
        std::cerr << "inconsistency: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

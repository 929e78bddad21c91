#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "flagrank/bounds.hpp"
#include "flagrank/config.hpp"
#include "flagrank/oscproj.hpp"
#include "flagrank/report.hpp"
#include "flagrank/secant.hpp"
#include "flagrank/spans.hpp"

namespace flagrank {

// ------------------------------------------------------------------------
// Built-in invariant suites over a desk-scale corpus.  Each check records
// its inputs and outcome; a suite passes when every executed check passes.
// The budget is a deterministic work allowance (not wall clock), so a
// repeated command skips exactly the same checks and stays byte-identical.
// ------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const CheckResult& c : checks)
            if (!c.skipped && !c.pass) return false;
        return true;
    }

    json to_json() const {
        json arr = json::array();
        std::size_t executed = 0, skipped = 0;
        for (const CheckResult& c : checks) {
            json e;
            e["name"] = c.name;
            if (c.skipped) {
                e["skipped"] = true;
                ++skipped;
            } else {
                e["pass"] = c.pass;
                ++executed;
            }
            if (!c.detail.empty()) e["detail"] = c.detail;
            arr.push_back(std::move(e));
        }
        json j;
        j["suite"] = suite;
        j["all_pass"] = all_pass();
        j["checked"] = executed;
        j["skipped"] = skipped;
        j["checks"] = std::move(arr);
        return j;
    }
};

struct VerifyOptions {
    EngineOptions engine;
    int nmax = 4;                  // chordal suite: full flags up to F(0,n-1;n)
    std::uint64_t budget_units = 0; // 0 = unlimited; ~2e7 units per desktop second
    std::vector<FlagShape> shapes; // optional corpus override where meaningful
    int jobs = 1;
};

// Rough deterministic cost model for one rank computation: entries of the
// stacked Terracini matrix times a small elimination factor.
inline std::uint64_t secant_cost_estimate(const FlagShape& s, std::uint64_t h) {
    BigInt rows = BigInt(h) * (full_entry_count(s) + 1);
    BigInt cost = rows * ambient_affine(s) * 4;
    if (cost > BigInt(UINT64_MAX)) return UINT64_MAX;
    return to_u64_checked(cost, "cost");
}

// Raised inside suite bodies to report a failed expectation with context.
struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void expect(bool ok, const std::string& msg) {
    if (!ok) throw CheckFailure(msg);
}

inline void run_checks(std::vector<std::function<CheckResult()>>& tasks,
                       std::vector<CheckResult>& out, int jobs) {
    out.resize(tasks.size());
    if (jobs <= 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = tasks[i]();
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            out[i] = tasks[i]();
        }
    };
    std::vector<std::thread> pool;
    int nthreads = std::min<int>(jobs, static_cast<int>(tasks.size()));
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
}

inline CheckResult guard(const std::string& name, const std::function<std::string()>& body) {
    CheckResult c;
    c.name = name;
    try {
        c.detail = body();
        c.pass = true;
    } catch (const CheckFailure& e) {
        c.pass = false;
        c.detail = e.what();
    }
    return c;
}

} // namespace detail

// Suite `osc`: for products, the exact rank of the osculating space at the
// staircase origin equals both the closed formula and the coordinate-ball
// count, at every order up to the diameter.
inline SuiteReport suite_osc(const VerifyOptions& vo) {
    SuiteReport rep;
    rep.suite = "osc";
    std::vector<FlagShape> shapes = vo.shapes;
    if (shapes.empty())
        for (const char* t : {"G:1;3", "G:2;5", "G:0,1;3", "G:1,1;4"}) shapes.push_back(parse_shape(t));
    std::vector<std::function<CheckResult()>> tasks;
    for (const FlagShape& s : shapes) {
        if (s.mode != Mode::Product)
            throw UsageError("osc suite: product shapes only, got " + shape_to_string(s));
        for (int t = 0; t <= s.diameter(); ++t) {
            std::string name = shape_to_string(s) + " s=" + std::to_string(t);
            tasks.push_back([s, t, name] {
                return detail::guard(name, [&] {
                    std::size_t rank = osculating_rank_by_derivatives(s, t);
                    BigInt formula = osc_dim_formula(s, t);
                    MultiIndex I = detail::first_staircase_point(s);
                    std::size_t ball = ball_columns(s, I, t).size();
                    std::string d = "rank=" + std::to_string(rank) + " formula=" + formula.str() +
                                    " ball=" + std::to_string(ball);
                    detail::expect(BigInt(rank) == formula && rank == ball, "mismatch: " + d);
                    return d;
                });
            });
        }
    }
    detail::run_checks(tasks, rep.checks, vo.jobs);
    return rep;
}

// Suite `wb`: for flags, the brute-force symbolic osculating rank agrees
// with the mod-p intersection of the coordinate ball with the variety span.
inline SuiteReport suite_wb(const VerifyOptions& vo) {
    SuiteReport rep;
    rep.suite = "wb";
    std::vector<FlagShape> shapes = vo.shapes;
    if (shapes.empty())
        for (const char* t : {"0,1;2", "0,1;3", "1,2;4", "0,2;3"}) shapes.push_back(parse_shape(t));
    PrimeField f(vo.engine.prime);
    std::vector<std::function<CheckResult()>> tasks;
    std::vector<SubspaceBasis<PrimeField>> spans;
    spans.reserve(shapes.size());
    for (const FlagShape& s : shapes) {
        if (s.mode != Mode::Flag)
            throw UsageError("wb suite: flag shapes only, got " + shape_to_string(s));
        Rng rng(mix_seed(vo.engine.seed, "wb-span|" + shape_to_string(s)));
        spans.push_back(linear_span(f, s, rng));
        const SubspaceBasis<PrimeField>* span = &spans.back();
        for (int t = 0; t <= s.diameter(); ++t) {
            std::string name = shape_to_string(s) + " s=" + std::to_string(t);
            tasks.push_back([s, t, name, span, f] {
                return detail::guard(name, [&] {
                    MultiIndex I = detail::first_staircase_point(s);
                    std::size_t modp = 0;
                    bool ok = well_behaved_check(f, s, I, t, span, &modp);
                    std::string d = "modp_rank=" + std::to_string(modp);
                    detail::expect(ok, "exact and mod-p osculating ranks differ: " + d);
                    return d;
                });
            });
        }
    }
    detail::run_checks(tasks, rep.checks, vo.jobs);
    return rep;
}

// Suite `flat`: flat-limit regularity along the explicit degeneration
// curves, exactly over the rationals.
inline SuiteReport suite_flat(const VerifyOptions& vo) {
    SuiteReport rep;
    rep.suite = "flat";
    std::vector<std::function<CheckResult()>> tasks;
    for (int s1 = 0; s1 <= 1; ++s1)
        for (int s2 = 0; s2 <= 1; ++s2) {
            std::string name = "strong2 G:1;3 (" + std::to_string(s1) + "," + std::to_string(s2) + ")";
            tasks.push_back([s1, s2, name] {
                return detail::guard(name, [&] {
                    detail::expect(strong2_flatlimit_check(parse_shape("G:1;3"), s1, s2),
                                   "limit escapes the target osculating space");
                    return std::string("limit inside T^(s1+s2+1)");
                });
            });
        }
    for (int t = 0; t <= 1; ++t) {
        std::string name = "alpha-osc G:1;5 s=" + std::to_string(t);
        tasks.push_back([t, name] {
            return detail::guard(name, [&] {
                detail::expect(alpha_osc_flatlimit_check(parse_shape("G:1;5"), t),
                               "limit escapes the target osculating space");
                return std::string("limit inside T^(2s+1)");
            });
        });
    }
    detail::run_checks(tasks, rep.checks, vo.jobs);
    return rep;
}

// Suite `proj`: osculating projections from alpha-1 staircase points are
// generically finite at the orders the staircase argument uses.
inline SuiteReport suite_proj(const VerifyOptions& vo) {
    SuiteReport rep;
    rep.suite = "proj";
    std::vector<std::function<CheckResult()>> tasks;
    for (const char* t : {"0,1;3", "1,2;4"}) {
        FlagShape s = parse_shape(t);
        int m = s.alpha() - 1;
        int order = s.r() - 2 + s.sum_k();
        std::vector<int> orders(static_cast<std::size_t>(m), order);
        std::string name = std::string("proj ") + t + " m=" + std::to_string(m) +
                           " order=" + std::to_string(order);
        EngineOptions eo = vo.engine;
        tasks.push_back([s, orders, name, eo] {
            return detail::guard(name, [&] {
                ProjectionCenter c = build_center(s, orders, eo);
                std::string d = "residual=" + std::to_string(c.residual);
                detail::expect(generic_finiteness(s, c, eo),
                               "projection drops rank on a general tangent space: " + d);
                return d;
            });
        });
    }
    detail::run_checks(tasks, rep.checks, vo.jobs);
    return rep;
}

// Suite `chordal`: full reproduction of the incidence-variety picture for
// F(0,n-1;n): the form vanishes on the variety, spans sit in its
// hyperplane, and the 2-secant defect is exactly 1.
inline SuiteReport suite_chordal(const VerifyOptions& vo) {
    SuiteReport rep;
    rep.suite = "chordal";
    std::vector<std::function<CheckResult()>> tasks;
    for (int n = 2; n <= vo.nmax; ++n) {
        std::string name = "chordal F(0," + std::to_string(n - 1) + ";" + std::to_string(n) + ")";
        EngineOptions eo = vo.engine;
        tasks.push_back([n, name, eo] {
            return detail::guard(name, [&] {
                ChordalReport r = chordal_check(n, eo);
                std::string d = "defect=" + std::to_string(r.two_secant_defect);
                detail::expect(r.form_vanishes_on_variety, "incidence form fails to vanish");
                detail::expect(r.spans_hyperplane, "span rank is not (n+1)^2-1");
                detail::expect(r.form_nonzero_on_ambient, "form vanishes identically");
                detail::expect(r.two_secant_defect == 1, "2-secant defect is not 1: " + d);
                detail::expect(r.certified, "primes disagree");
                return d;
            });
        });
    }
    detail::run_checks(tasks, rep.checks, vo.jobs);
    return rep;
}

// Suite `cross`: every (shape, h) certified non-defective by the closed-form
// bounds, plus one step past, must come out defect 0 under the sampling
// engine (within caps and the deterministic budget).
inline SuiteReport suite_cross(const VerifyOptions& vo) {
    SuiteReport rep;
    rep.suite = "cross";
    std::vector<FlagShape> shapes = vo.shapes;
    if (shapes.empty())
        for (const char* t : {"0,1;3", "1,2;5", "0,2;5", "G:2;8", "G:1,1;4"})
            shapes.push_back(parse_shape(t));
    struct Task {
        FlagShape shape;
        std::uint64_t h;
        bool skipped;
        std::string skip_reason;
    };
    std::vector<Task> plan;
    std::uint64_t spent = 0;
    for (const FlagShape& s : shapes) {
        BoundReport b = best_defectivity_bound(s);
        if (!b.applicable || b.h_max == 0) continue;
        for (std::uint64_t h = 1; h <= b.h_max + 1; ++h) {
            Task t{s, h, false, ""};
            try {
                check_caps(s, h, vo.engine);
            } catch (const CapError&) {
                t.skipped = true;
                t.skip_reason = "cap";
            }
            if (!t.skipped && vo.budget_units > 0) {
                std::uint64_t cost = secant_cost_estimate(s, h);
                if (spent + cost > vo.budget_units) {
                    t.skipped = true;
                    t.skip_reason = "budget";
                } else {
                    spent += cost;
                }
            }
            plan.push_back(std::move(t));
        }
    }
    std::vector<std::function<CheckResult()>> tasks;
    for (const Task& t : plan) {
        std::string name = shape_to_string(t.shape) + " h=" + std::to_string(t.h);
        if (t.skipped) {
            std::string why = t.skip_reason;
            tasks.push_back([name, why] {
                CheckResult c;
                c.name = name;
                c.skipped = true;
                c.detail = "skipped: " + why;
                return c;
            });
            continue;
        }
        FlagShape s = t.shape;
        std::uint64_t h = t.h;
        EngineOptions eo = vo.engine;
        tasks.push_back([s, h, name, eo] {
            return detail::guard(name, [&] {
                SecantResult r = secant_dimension(s, h, eo);
                std::string d = "rank=" + std::to_string(r.rank_affine) + "/" +
                                std::to_string(r.expected_affine);
                detail::expect(r.defect() == 0, "defect " + std::to_string(r.defect()) + ": " + d);
                detail::expect(r.certified, "primes disagree: " + d);
                return d;
            });
        });
    }
    detail::run_checks(tasks, rep.checks, vo.jobs);
    return rep;
}

inline SuiteReport run_suite(const std::string& name, const VerifyOptions& vo) {
    if (name == "osc") return suite_osc(vo);
    if (name == "wb") return suite_wb(vo);
    if (name == "flat") return suite_flat(vo);
    if (name == "proj") return suite_proj(vo);
    if (name == "chordal") return suite_chordal(vo);
    if (name == "cross") return suite_cross(vo);
    throw UsageError("unknown verify suite '" + name + "' (expected osc|wb|flat|proj|chordal|cross)");
}

} // namespace flagrank

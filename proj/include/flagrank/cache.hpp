#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "flagrank/report.hpp"
#include "flagrank/shape.hpp"

namespace flagrank {

// Append-only newline-delimited JSON cache for rank computations, keyed by
// everything that determines the result.  Safe to delete at any time; a
// later duplicate key simply overrides the earlier line on load, and since
// results are deterministic the records coincide anyway.
class RankCache {
  public:
    explicit RankCache(std::string path = {}) : path_(std::move(path)) { load(); }

    bool enabled() const { return !path_.empty(); }
    const std::string& path() const { return path_; }
    std::size_t size() const { return entries_.size(); }

    static std::string make_key(const FlagShape& s, std::uint64_t h, std::uint64_t prime,
                                std::uint64_t seed) {
        return shape_to_string(s) + "|h=" + std::to_string(h) + "|p=" + std::to_string(prime) +
               "|seed=" + std::to_string(seed);
    }

    const json* find(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    void put(const std::string& key, const json& record) {
        if (!enabled()) return;
        auto it = entries_.find(key);
        if (it != entries_.end() && it->second == record) return; // already stored
        entries_[key] = record; // last line wins on load
        std::ofstream out(path_, std::ios::app);
        if (!out) throw UsageError("cache: cannot write " + path_);
        json line;
        line["key"] = key;
        line["record"] = record;
        out << to_cache_line(line) << '\n';
    }

  private:
    void load() {
        if (!enabled()) return;
        std::ifstream in(path_);
        if (!in) return; // absent file: start empty
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("key") || !j.contains("record"))
                continue; // tolerate damage: the cache is disposable
            entries_[j["key"].get<std::string>()] = j["record"];
        }
    }

    std::string path_;
    std::map<std::string, json> entries_;
};

// Serves the cached record when one exists for the same key and trial
// count, else computes, stores and returns it.  Determinism makes the two
// paths byte-identical.
inline json cached_secant_record(RankCache& cache, const FlagShape& s, std::uint64_t h,
                                 const EngineOptions& o) {
    std::string key = RankCache::make_key(s, h, o.prime, o.seed);
    if (const json* hit = cache.find(key)) {
        if (hit->contains("trials") && (*hit)["trials"] == o.trials) return *hit;
    }
    SecantResult r = secant_dimension(s, h, o);
    json record = secant_report(s, r);
    cache.put(key, record);
    return record;
}

struct ScanEntry {
    FlagShape shape;
    std::uint64_t h = 0;
    json record;       // null when the entry failed
    std::string error; // empty on success
};

// Grid scan over shapes x h-range.  Per-entry failures are recorded and the
// scan continues.  Once some h fills the span of a shape, larger h are
// derived instead of resampled; derived rows are not cached so that a cache
// hit always matches a direct recomputation byte for byte.
inline std::vector<ScanEntry> scan_grid(RankCache& cache, const std::vector<FlagShape>& shapes,
                                        std::uint64_t h_lo, std::uint64_t h_hi,
                                        const EngineOptions& o) {
    std::vector<ScanEntry> out;
    for (const FlagShape& s : shapes) {
        bool filled = false;
        for (std::uint64_t h = h_lo; h <= h_hi; ++h) {
            ScanEntry e;
            e.shape = s;
            e.h = h;
            try {
                if (filled) {
                    SecantResult d;
                    d.h = h;
                    d.span_affine = to_u64_checked(span_dim_affine(s), "span");
                    d.rank_affine = d.span_affine;
                    d.expected_affine = d.span_affine;
                    d.prime = o.prime;
                    d.prime2 = confirmation_prime(o.prime);
                    d.seed = o.seed;
                    d.trials = o.trials;
                    d.certified = true;
                    d.sampled = false;
                    e.record = secant_report(s, d);
                } else {
                    e.record = cached_secant_record(cache, s, h, o);
                    filled = e.record["fills"].get<bool>();
                }
            } catch (const Error& err) {
                e.error = err.what();
            }
            out.push_back(std::move(e));
        }
    }
    return out;
}

} // namespace flagrank

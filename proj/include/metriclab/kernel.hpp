#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "metriclab/domain.hpp"

namespace metriclab {

struct KernelEntry {
    std::vector<int> alpha;
    double coeff; // 1 / ||z^alpha||^2
};

/// Truncated Bergman kernel of a catalog domain: K_D(z,t) = sum c_a z^a conj(t^a)
/// over every allowed |alpha| <= D. Immutable once built; the single source of
/// the metric, curvature and representative coordinates downstream.
struct KernelSeries {
    DomainSpec spec;
    int degree_cap = 0;
    std::vector<KernelEntry> entries;
};

/// Orthonormalization coefficients from the monomial norms. Entries whose
/// coefficient underflows to zero (deep Laurent orders of a scaled annulus)
/// are dropped; they are numerically absent from every evaluation anyway.
inline KernelSeries build_kernel_series(const DomainSpec& spec, int D) {
    if (D < 2) throw ConfigFailure("build_kernel_series: degree cap must be >= 2");
    KernelSeries ks{spec, D, {}};
    for (auto& a : allowed_exponents(spec, D)) {
        double nrm = monomial_norm(spec, a);
        if (!(nrm > 0.0)) throw QuadratureFailure("build_kernel_series: bad norm");
        double c = 1.0 / nrm;
        if (c > 0.0 && std::isfinite(c)) ks.entries.push_back({a, c});
    }
    return ks;
}

inline cdouble kernel_eval(const KernelSeries& ks, const Point& z, const Point& t) {
    detail::check_dim(ks.spec, z.coords, "kernel_eval");
    detail::check_dim(ks.spec, t.coords, "kernel_eval");
    const int n = ks.spec.dim;
    cdouble sum = 0.0;
    for (const auto& e : ks.entries) {
        cdouble m = e.coeff;
        bool zero = false;
        for (int i = 0; i < n && !zero; ++i) {
            const int a = e.alpha[i];
            if (a == 0) continue;
            cdouble zi = z.coords[i], ti = t.coords[i];
            if ((zi == 0.0 || ti == 0.0)) {
                if (a > 0) { zero = true; continue; }
                throw OutsideDomain("kernel_eval: Laurent exponent at a vanishing coordinate");
            }
            m *= std::pow(zi, a) * std::conj(std::pow(ti, a));
        }
        if (!zero) sum += m;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// serialization + disk cache, keyed by (canonical spec text, degree cap)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const KernelSeries& ks) {
    nlohmann::ordered_json j;
    j["spec"] = ks.spec.canonical_text();
    j["degree_cap"] = ks.degree_cap;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : ks.entries) {
        nlohmann::ordered_json je;
        je["alpha"] = e.alpha;
        je["coeff"] = e.coeff;
        arr.push_back(std::move(je));
    }
    j["entries"] = std::move(arr);
    return j;
}

inline KernelSeries kernel_series_from_json(const nlohmann::json& j) {
    KernelSeries ks;
    ks.spec = DomainSpec::parse(j.at("spec").get<std::string>());
    ks.degree_cap = j.at("degree_cap").get<int>();
    for (const auto& je : j.at("entries")) {
        KernelEntry e;
        e.alpha = je.at("alpha").get<std::vector<int>>();
        e.coeff = je.at("coeff").get<double>();
        ks.entries.push_back(std::move(e));
    }
    return ks;
}

inline std::filesystem::path kernel_cache_dir() {
    if (const char* env = std::getenv("METRICLAB_CACHE_DIR"); env && *env)
        return std::filesystem::path(env);
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
        return std::filesystem::path(xdg) / "metriclab";
    if (const char* home = std::getenv("HOME"); home && *home)
        return std::filesystem::path(home) / ".cache" / "metriclab";
    return std::filesystem::temp_directory_path() / "metriclab-cache";
}

inline std::string kernel_cache_key(const DomainSpec& spec, int D) {
    std::string key = spec.canonical_text();
    for (auto& ch : key)
        if (ch == ':' || ch == '*' || ch == '/' || ch == '.') ch = '_';
    return key + "_D" + std::to_string(D) + ".json";
}

/// Builds the series, or loads it from the cache directory when a file for
/// the same (spec, D) key exists. Failures to read or write the cache fall
/// back to a fresh build; the cache is an accelerator, not a dependency.
inline KernelSeries load_or_build_kernel_series(const DomainSpec& spec, int D) {
    namespace fs = std::filesystem;
    fs::path file = kernel_cache_dir() / kernel_cache_key(spec, D);
    std::error_code ec;
    if (fs::exists(file, ec)) {
        try {
            std::ifstream in(file);
            nlohmann::json j;
            in >> j;
            KernelSeries ks = kernel_series_from_json(j);
            if (ks.spec == spec && ks.degree_cap == D) return ks;
        } catch (...) {
            // fall through to rebuild
        }
    }
    KernelSeries ks = build_kernel_series(spec, D);
    fs::create_directories(kernel_cache_dir(), ec);
    if (!ec) {
        std::ofstream out(file);
        if (out) out << to_json(ks).dump();
    }
    return ks;
}

/// Removes every cached series file. Returns the number of files removed.
inline int clear_kernel_cache() {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::path dir = kernel_cache_dir();
    if (!fs::exists(dir, ec)) return 0;
    int removed = 0;
    for (auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.path().extension() == ".json") {
            fs::remove(entry.path(), ec);
            if (!ec) ++removed;
        }
    }
    return removed;
}

} // namespace metriclab

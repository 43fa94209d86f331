#include "vallearn/oracles.hpp"

#include <cmath>
#include <sstream>

#include "vallearn/error.hpp"
#include "vallearn/linsep.hpp"

namespace vallearn {
namespace {

constexpr double kSlack = 1e-9;

std::vector<double> tabulate(const Valuation& v, std::uint32_t max_n, const char* who) {
    const std::uint32_t n = v.ground_size();
    if (n > max_n)
        throw Error(std::string(who) + ": requires n <= " + std::to_string(max_n) + " (got " +
                    std::to_string(n) + ")");
    std::vector<double> f(std::size_t(1) << n);
    for (std::uint64_t mask = 0; mask < f.size(); ++mask)
        f[mask] = v.eval(ItemSet::from_mask(n, mask));
    return f;
}

std::string set_str(const ItemSet& s) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (std::uint32_t i : s.indices()) {
        if (!first) os << ',';
        os << i;
        first = false;
    }
    os << '}';
    return os.str();
}

}  // namespace

std::optional<Violation> check_monotone(const Valuation& v) {
    const std::uint32_t n = v.ground_size();
    auto f = tabulate(v, 16, "check_monotone");
    for (std::uint64_t mask = 0; mask < f.size(); ++mask) {
        for (std::uint32_t i = 0; i < n; ++i) {
            if (mask & (1ULL << i)) continue;
            std::uint64_t bigger = mask | (1ULL << i);
            if (f[bigger] < f[mask] - kSlack) {
                auto s = ItemSet::from_mask(n, mask);
                auto t = ItemSet::from_mask(n, bigger);
                std::ostringstream os;
                os << "f(" << set_str(s) << ") = " << f[mask] << " > f(" << set_str(t)
                   << ") = " << f[bigger];
                return Violation{"monotone", {s, t}, {f[mask], f[bigger]}, os.str()};
            }
        }
    }
    return std::nullopt;
}

std::optional<Violation> check_subadditive(const Valuation& v) {
    const std::uint32_t n = v.ground_size();
    auto f = tabulate(v, 14, "check_subadditive");
    for (std::uint64_t a = 0; a < f.size(); ++a) {
        for (std::uint64_t b = a; b < f.size(); ++b) {
            std::uint64_t u = a | b;
            if (f[u] > f[a] + f[b] + kSlack) {
                auto sa = ItemSet::from_mask(n, a);
                auto sb = ItemSet::from_mask(n, b);
                std::ostringstream os;
                os << "f(" << set_str(sa.set_union(sb)) << ") = " << f[u] << " > f("
                   << set_str(sa) << ") + f(" << set_str(sb) << ") = " << f[a] + f[b];
                return Violation{"subadditive", {sa, sb}, {f[u], f[a], f[b]}, os.str()};
            }
        }
    }
    return std::nullopt;
}

std::optional<Violation> check_submodular(const Valuation& v) {
    const std::uint32_t n = v.ground_size();
    auto f = tabulate(v, 14, "check_submodular");
    for (std::uint64_t mask = 0; mask < f.size(); ++mask) {
        for (std::uint32_t i = 0; i < n; ++i) {
            if (mask & (1ULL << i)) continue;
            for (std::uint32_t j = i + 1; j < n; ++j) {
                if (mask & (1ULL << j)) continue;
                std::uint64_t si = mask | (1ULL << i);
                std::uint64_t sj = mask | (1ULL << j);
                std::uint64_t sij = si | (1ULL << j);
                if (f[sij] - f[si] > f[sj] - f[mask] + kSlack) {
                    auto s = ItemSet::from_mask(n, mask);
                    std::ostringstream os;
                    os << "adding " << j << " gains more on top of " << set_str(s) << "+{" << i
                       << "} (" << f[sij] - f[si] << ") than on " << set_str(s) << " ("
                       << f[sj] - f[mask] << ")";
                    return Violation{
                        "submodular", {s}, {f[mask], f[si], f[sj], f[sij]}, os.str()};
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<Violation> check_gs_triples(const Valuation& v) {
    const std::uint32_t n = v.ground_size();
    auto f = tabulate(v, 12, "check_gs_triples");
    for (std::uint64_t mask = 0; mask < f.size(); ++mask) {
        const double base = f[mask];
        for (std::uint32_t a = 0; a < n; ++a) {
            if (mask & (1ULL << a)) continue;
            for (std::uint32_t b = a + 1; b < n; ++b) {
                if (mask & (1ULL << b)) continue;
                for (std::uint32_t c = b + 1; c < n; ++c) {
                    if (mask & (1ULL << c)) continue;
                    const double ma = f[mask | (1ULL << a)] - base;
                    const double mb = f[mask | (1ULL << b)] - base;
                    const double mc = f[mask | (1ULL << c)] - base;
                    const double mab = f[mask | (1ULL << a) | (1ULL << b)] - base;
                    const double mac = f[mask | (1ULL << a) | (1ULL << c)] - base;
                    const double mbc = f[mask | (1ULL << b) | (1ULL << c)] - base;
                    const double p1 = mab + mc;
                    const double p2 = mac + mb;
                    const double p3 = mbc + ma;
                    const double top = std::max({p1, p2, p3});
                    int winners = 0;
                    if (p1 > top - kSlack) ++winners;
                    if (p2 > top - kSlack) ++winners;
                    if (p3 > top - kSlack) ++winners;
                    if (winners == 1) {
                        auto s = ItemSet::from_mask(n, mask);
                        auto triple = ItemSet::from_indices(n, {a, b, c});
                        std::ostringstream os;
                        os << "unique best pairing over " << set_str(s) << " with triple "
                           << set_str(triple) << ": " << p1 << " / " << p2 << " / " << p3;
                        return Violation{
                            "gs_triples", {s, triple}, {ma, mb, mc, mab, mac, mbc}, os.str()};
                    }
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<Violation> check_xos_polyhedron(const Valuation& v) {
    const std::uint32_t n = v.ground_size();
    (void)v.as_xos();
    auto f = tabulate(v, 6, "check_xos_polyhedron");

    std::vector<LpConstraint> constraints;
    for (std::uint64_t mask = 1; mask < f.size(); ++mask) {
        LpConstraint c;
        c.coeffs.assign(n, 0.0);
        for (std::uint32_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) c.coeffs[i] = 1.0;
        c.bound = f[mask];
        constraints.push_back(std::move(c));
    }

    for (std::uint64_t mask = 1; mask < f.size(); ++mask) {
        std::vector<double> objective(n, 0.0);
        for (std::uint32_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) objective[i] = 1.0;
        LpResult r = lp_maximize(objective, constraints, /*nonneg=*/true);
        if (r.status != LpStatus::Optimal)
            throw Error("check_xos_polyhedron: interior LP failed to solve");
        if (std::fabs(r.value - f[mask]) > 1e-6) {
            auto t = ItemSet::from_mask(n, mask);
            std::ostringstream os;
            os << "LP optimum over " << set_str(t) << " is " << r.value << " but f = " << f[mask];
            return Violation{"xos_polyhedron", {t}, {r.value, f[mask]}, os.str()};
        }
    }
    return std::nullopt;
}

}  // namespace vallearn

#include "support/brute_force.hpp"

#include <stdexcept>

#include "dpn/tableau.hpp"

namespace dpn::testsupport {

std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> b) {
    size_t n = a.size();
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && a[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        Rational inv = Rational(1) / a[col][col];
        for (size_t j = 0; j < n; ++j) a[col][j] *= inv;
        b[col] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            Rational factor = a[r][col];
            for (size_t j = 0; j < n; ++j) a[r][j] -= factor * a[col][j];
            b[r] -= factor * b[col];
        }
    }
    return b;
}

VertexEnumeration enumerate_vertices(const LinearSystem& system, const Objective& objective) {
    NormalizedSystem ns = normalize(system);
    int n = ns.num_structural;
    int m = static_cast<int>(ns.rows.size());
    int total = m + n;  // rows, then nonnegativity bounds x_i >= 0

    VertexEnumeration best;
    std::vector<int> pick;
    auto row_coeff = [&](int which, int var) -> Rational {
        if (which < m) {
            auto it = ns.rows[static_cast<size_t>(which)].find(var);
            return it == ns.rows[static_cast<size_t>(which)].end() ? Rational(0) : it->second;
        }
        return which - m == var ? Rational(1) : Rational(0);
    };
    auto row_rhs = [&](int which) -> Rational {
        return which < m ? ns.rhs[static_cast<size_t>(which)] : Rational(0);
    };

    auto consider = [&](const std::vector<int>& active) {
        std::vector<std::vector<Rational>> a(static_cast<size_t>(n),
                                             std::vector<Rational>(static_cast<size_t>(n)));
        std::vector<Rational> b(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            for (int v = 0; v < n; ++v) a[static_cast<size_t>(i)][static_cast<size_t>(v)] =
                row_coeff(active[static_cast<size_t>(i)], v);
            b[static_cast<size_t>(i)] = row_rhs(active[static_cast<size_t>(i)]);
        }
        auto point = solve_square(std::move(a), std::move(b));
        if (!point) return;
        for (const auto& x : *point)
            if (x < Rational(0)) return;
        for (int r = 0; r < m; ++r) {
            Rational lhs;
            for (const auto& [idx, coef] : ns.rows[static_cast<size_t>(r)])
                lhs += coef * (*point)[static_cast<size_t>(idx)];
            if (lhs > ns.rhs[static_cast<size_t>(r)]) return;
        }
        Rational value = LinearSystem::eval(objective.coeffs, *point);
        bool better = objective.sense == Objective::Sense::Maximize ? value > best.best_value
                                                                    : value < best.best_value;
        if (!best.any_feasible_vertex || better) {
            best.any_feasible_vertex = true;
            best.best_value = value;
            best.best_point = *point;
        }
    };

    // All n-subsets of the `total` candidate active constraints.
    std::vector<int> idx(static_cast<size_t>(n));
    auto recurse = [&](auto&& self, int start, int depth) -> void {
        if (depth == n) {
            consider(idx);
            return;
        }
        for (int i = start; i < total; ++i) {
            idx[static_cast<size_t>(depth)] = i;
            self(self, i + 1, depth + 1);
        }
    };
    if (n > 0) recurse(recurse, 0, 0);
    return best;
}

std::vector<std::vector<Rational>> integer_box_points(const LinearSystem& system) {
    std::vector<long> bounds;
    for (const auto& v : system.variables) {
        if (!v.upper_bound)
            throw std::logic_error("integer_box_points requires bounded variables");
        bounds.push_back(*v.upper_bound);
    }
    std::vector<std::vector<Rational>> points;
    std::vector<long> cur(bounds.size(), 0);
    for (;;) {
        std::vector<Rational> point;
        point.reserve(cur.size());
        for (long x : cur) point.emplace_back(static_cast<long>(x));
        if (system.satisfied_by(point)) points.push_back(std::move(point));
        size_t k = 0;
        while (k < cur.size() && cur[k] == bounds[k]) cur[k++] = 0;
        if (k == cur.size()) break;
        ++cur[k];
    }
    return points;
}

BoxEnumeration enumerate_integer_box(const LinearSystem& system, const Objective& objective) {
    BoxEnumeration best;
    for (auto& point : integer_box_points(system)) {
        Rational value = LinearSystem::eval(objective.coeffs, point);
        bool better = objective.sense == Objective::Sense::Maximize
                          ? value > best.best_value
                          : value < best.best_value;
        if (!best.feasible || better) {
            best.feasible = true;
            best.best_value = value;
            best.best_point = std::move(point);
        }
    }
    return best;
}

}  // namespace dpn::testsupport

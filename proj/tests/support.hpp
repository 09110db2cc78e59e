#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "curvlab/catalog.hpp"
#include "curvlab/expr.hpp"
#include "curvlab/metric.hpp"

namespace testing {

using namespace curvlab;

inline ScalarExpr expr(const std::string& text, const std::vector<std::string>& coords)
{
    return parse_expr(text, coords);
}

/// Metric from (i, j, text) entries; unset entries are zero.
inline MetricField make_metric(std::string label, std::vector<std::string> coords,
                               const std::vector<std::tuple<int, int, std::string>>& entries,
                               std::vector<int> signature, std::vector<Interval> domain)
{
    std::vector<ComponentEntry> parsed;
    for (const auto& [i, j, text] : entries) parsed.push_back({i, j, parse_expr(text, coords)});
    const int n = static_cast<int>(coords.size());
    return MetricField(std::move(label), std::move(coords), symmetric_components(n, parsed), std::move(signature),
                       std::move(domain));
}

/// Unit 2-sphere in (theta, phi).
inline MetricField sphere2()
{
    return make_metric("s2", {"th", "ph"}, {{0, 0, "1"}, {1, 1, "sin(th)^2"}}, {1, 1}, {{0.3, 2.8}, {0.0, 6.0}});
}

inline const CatalogEntry& entry(const std::string& name)
{
    const CatalogEntry* e = find_entry(name);
    if (!e) throw std::runtime_error("missing catalog entry " + name);
    return *e;
}

/// Central difference of f along coordinate k with step h.
inline double central_difference(const std::function<double(const Point&)>& f, const Point& p, int k, double h)
{
    Point a = p, b = p;
    a[k] += h;
    b[k] -= h;
    return (f(a) - f(b)) / (2.0 * h);
}

inline double relative_difference(double a, double b)
{
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

/// Names of all catalog entries, for data-driven loops.
inline std::vector<std::string> catalog_names()
{
    std::vector<std::string> names;
    for (const CatalogEntry& e : catalog_entries()) names.push_back(e.name);
    return names;
}

}  // namespace testing

#include "boxbound/measure.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include <fmt/format.h>

#include "boxbound/errors.hpp"

namespace boxbound {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void validate(const Marginal& marginal) {
    std::visit(overloaded{
                   [](const UniformInterval& u) {
                       if (!std::isfinite(u.a) || !std::isfinite(u.b) || !(u.a < u.b))
                           throw InputError(
                               fmt::format("uniform marginal needs a < b, got [{}, {}]", u.a, u.b));
                   },
                   [](const PiecewiseCdf& p) {
                       if (p.knots.size() < 2 || p.knots.size() != p.values.size())
                           throw InputError("piecewise CDF needs >= 2 knots and one value per knot");
                       for (std::size_t i = 1; i < p.knots.size(); ++i) {
                           if (!(p.knots[i - 1] < p.knots[i]))
                               throw InputError("piecewise CDF knots must be strictly increasing");
                           if (!(p.values[i - 1] <= p.values[i]))
                               throw InputError("piecewise CDF values must be nondecreasing");
                       }
                       if (p.values.front() != 0.0 || p.values.back() != 1.0)
                           throw InputError("piecewise CDF values must start at 0 and end at 1");
                   },
               },
               marginal);
}

double cdf(const Marginal& marginal, double x) {
    return std::visit(overloaded{
                          [x](const UniformInterval& u) {
                              return std::clamp((x - u.a) / (u.b - u.a), 0.0, 1.0);
                          },
                          [x](const PiecewiseCdf& p) {
                              if (x <= p.knots.front())
                                  return 0.0;
                              if (x >= p.knots.back())
                                  return 1.0;
                              const auto hi = std::upper_bound(p.knots.begin(), p.knots.end(), x);
                              const auto i = static_cast<std::size_t>(hi - p.knots.begin());
                              const double t = (x - p.knots[i - 1]) / (p.knots[i] - p.knots[i - 1]);
                              return p.values[i - 1] + t * (p.values[i] - p.values[i - 1]);
                          },
                      },
                      marginal);
}

double quantile(const Marginal& marginal, double u) {
    u = std::clamp(u, 0.0, 1.0);
    return std::visit(overloaded{
                          [u](const UniformInterval& m) { return m.a + u * (m.b - m.a); },
                          [u](const PiecewiseCdf& p) {
                              // first segment whose right value reaches u
                              const auto hi = std::lower_bound(p.values.begin() + 1, p.values.end(), u);
                              const auto i = static_cast<std::size_t>(hi - p.values.begin());
                              const double rise = p.values[i] - p.values[i - 1];
                              if (rise <= 0.0)
                                  return p.knots[i - 1];
                              const double t = (u - p.values[i - 1]) / rise;
                              return p.knots[i - 1] + t * (p.knots[i] - p.knots[i - 1]);
                          },
                      },
                      marginal);
}

ProductMeasure::ProductMeasure(std::vector<Marginal> marginals) : marginals_(std::move(marginals)) {
    if (marginals_.empty())
        throw InputError("product measure needs at least one marginal");
    for (const Marginal& m : marginals_)
        validate(m);
}

ProductMeasure ProductMeasure::uniform(const std::vector<double>& lower,
                                       const std::vector<double>& upper) {
    if (lower.size() != upper.size())
        throw InputError("uniform support: lower and upper differ in dimension");
    std::vector<Marginal> ms;
    ms.reserve(lower.size());
    for (std::size_t k = 0; k < lower.size(); ++k)
        ms.emplace_back(UniformInterval{lower[k], upper[k]});
    return ProductMeasure(std::move(ms));
}

double box_probability(const Box& box, const ProductMeasure& measure) {
    if (box.dim() != measure.dim())
        throw InputError(fmt::format("box '{}' is {}-d but the measure is {}-d", box.id, box.dim(),
                                     measure.dim()));
    double p = 1.0;
    for (std::size_t k = 0; k < box.dim(); ++k) {
        const double hi = cdf(measure.marginals()[k], box.upper[k]);
        const double lo = cdf(measure.marginals()[k], box.lower[k]);
        p *= std::max(0.0, hi - lo);
    }
    return p;
}

EmptinessMode default_mode(const ProductMeasure& measure) {
    return measure.is_continuous() ? EmptinessMode::PositiveMeasure : EmptinessMode::Closed;
}

}  // namespace boxbound

#include "boxbound/geometry.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "boxbound/errors.hpp"

namespace boxbound {

void validate(const Box& box) {
    if (box.lower.empty())
        throw InputError(fmt::format("box '{}' has dimension 0", box.id));
    if (box.lower.size() != box.upper.size())
        throw InputError(fmt::format("box '{}': lower has {} coordinates, upper has {}", box.id,
                                     box.lower.size(), box.upper.size()));
    for (std::size_t k = 0; k < box.dim(); ++k) {
        if (!(box.lower[k] <= box.upper[k]))
            throw InputError(fmt::format("box '{}': lower[{}] = {} exceeds upper[{}] = {}", box.id,
                                         k, box.lower[k], k, box.upper[k]));
    }
}

Box corner_meet(const Box& a, const Box& b) {
    if (a.dim() != b.dim())
        throw InputError(fmt::format("dimension mismatch: '{}' is {}-d, '{}' is {}-d", a.id,
                                     a.dim(), b.id, b.dim()));
    Box out{a.id + b.id, a.lower, a.upper};
    for (std::size_t k = 0; k < a.dim(); ++k) {
        out.lower[k] = std::max(a.lower[k], b.lower[k]);
        out.upper[k] = std::min(a.upper[k], b.upper[k]);
    }
    return out;
}

Box corner_meet(std::span<const Box> boxes) {
    if (boxes.empty())
        throw InputError("intersection of an empty list of boxes");
    Box out = boxes.front();
    for (const Box& b : boxes.subspan(1))
        out = corner_meet(out, b);
    return out;
}

namespace {

bool inverted(const Box& box) {
    for (std::size_t k = 0; k < box.dim(); ++k) {
        if (box.lower[k] > box.upper[k])
            return true;
    }
    return false;
}

}  // namespace

std::optional<Box> intersect(const Box& a, const Box& b) {
    Box out = corner_meet(a, b);
    if (inverted(out))
        return std::nullopt;
    return out;
}

std::optional<Box> intersect(std::span<const Box> boxes) {
    Box out = corner_meet(boxes);
    if (inverted(out))
        return std::nullopt;
    return out;
}

bool is_nonempty(const Box& box, EmptinessMode mode) {
    for (std::size_t k = 0; k < box.dim(); ++k) {
        const bool ok = mode == EmptinessMode::Closed ? box.lower[k] <= box.upper[k]
                                                      : box.lower[k] < box.upper[k];
        if (!ok)
            return false;
    }
    return true;
}

bool is_nonempty(const std::optional<Box>& box, EmptinessMode mode) {
    return box.has_value() && is_nonempty(*box, mode);
}

double volume(const Box& box) {
    double v = 1.0;
    for (std::size_t k = 0; k < box.dim(); ++k)
        v *= std::max(0.0, box.upper[k] - box.lower[k]);
    return v;
}

const char* to_string(EmptinessMode mode) {
    return mode == EmptinessMode::Closed ? "closed" : "positive-measure";
}

}  // namespace boxbound

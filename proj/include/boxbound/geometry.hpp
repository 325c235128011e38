#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace boxbound {

// Axis-aligned hyperrectangle given by its lower and upper corner.
// Coordinates are closed: the box is { x : lower <= x <= upper }.
struct Box {
    std::string id;
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dim() const { return lower.size(); }

    friend bool operator==(const Box&, const Box&) = default;
};

// Closed: a tuple intersects iff max(lower_k) <= min(upper_k) on every axis.
// PositiveMeasure: the strict version, i.e. the intersection has nonzero volume.
enum class EmptinessMode { Closed, PositiveMeasure };

// Throws InputError unless lower/upper share a dimension n >= 1 and lower <= upper.
void validate(const Box& box);

// Coordinate-wise max of lowers and min of uppers, without any emptiness check.
// The result may be inverted (lower_k > upper_k) on some axis; this is the raw
// vertex pair printed in screening tables. Ids are concatenated in input order.
Box corner_meet(std::span<const Box> boxes);
Box corner_meet(const Box& a, const Box& b);

// corner_meet, or nullopt when some axis has max-lower > min-upper.
// The result may be degenerate (zero width on some axis).
std::optional<Box> intersect(std::span<const Box> boxes);
std::optional<Box> intersect(const Box& a, const Box& b);

bool is_nonempty(const Box& box, EmptinessMode mode);
bool is_nonempty(const std::optional<Box>& box, EmptinessMode mode);

// Lebesgue volume; zero for inverted or degenerate boxes.
double volume(const Box& box);

const char* to_string(EmptinessMode mode);

}  // namespace boxbound

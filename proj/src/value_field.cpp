#include "wchj/value_field.hpp"

#include <cmath>
#include <stdexcept>

namespace wchj {

bool ValueField::has_time(double t) const {
    for (double s : times)
        if (std::abs(s - t) < 1e-9) return true;
    return false;
}

const std::vector<Field>& ValueField::at_time(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) < 1e-9) return fields[i];
    throw std::invalid_argument("ValueField: time " + std::to_string(t) + " not stored");
}

std::size_t ValueField::step_index(double t) const {
    if (step_times.empty()) throw std::invalid_argument("ValueField: no step series");
    double dt = step_times.size() > 1 ? step_times[1] - step_times[0] : 1.0;
    auto idx = static_cast<std::size_t>(std::llround(t / dt));
    if (idx >= step_times.size() || std::abs(step_times[idx] - t) > 1e-9)
        throw std::invalid_argument("ValueField: time " + std::to_string(t) + " not on the lattice");
    return idx;
}

}  // namespace wchj

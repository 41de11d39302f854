#include "ricdyn/frequency_profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ricdyn/error.hpp"

namespace ricdyn {
namespace {

void require_frequency(double omega) {
    if (!std::isfinite(omega) || omega < 0.0) {
        throw Error(ErrorKind::Domain,
                    "frequency must be finite and >= 0, got " + std::to_string(omega));
    }
}

template <class Get>
void require_increasing(std::size_t n, Get get, const char* what) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(get(i))) {
            throw Error(ErrorKind::Domain, std::string(what) + " must be finite");
        }
        if (i > 0 && !(get(i) > get(i - 1))) {
            throw Error(ErrorKind::Domain, std::string(what) + " must be strictly increasing");
        }
    }
}

// Index k of the interval [times[k], times[k+1]) containing t, clamped to [0, n-2].
std::size_t interval_index(const std::vector<double>& times, double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    return std::min(k, times.size() - 2);
}

const std::vector<FrequencyProfile::Segment> kNoSegments;
const std::vector<double> kNoSamples;

}  // namespace

FrequencyProfile FrequencyProfile::constant(double omega0) {
    require_frequency(omega0);
    return FrequencyProfile(Constant{omega0});
}

FrequencyProfile FrequencyProfile::piecewise_constant(std::vector<Segment> segments) {
    if (segments.empty()) {
        throw Error(ErrorKind::Domain, "piecewise-constant profile needs at least one segment");
    }
    require_increasing(
        segments.size(), [&](std::size_t i) { return segments[i].t_switch; }, "switch times");
    for (const auto& s : segments) require_frequency(s.omega);
    return FrequencyProfile(Piecewise{std::move(segments)});
}

FrequencyProfile FrequencyProfile::sampled(std::vector<double> times, std::vector<double> omegas) {
    if (times.size() != omegas.size()) {
        throw Error(ErrorKind::Domain, "sampled profile: times and values differ in length");
    }
    if (times.size() < 2) {
        throw Error(ErrorKind::Domain, "sampled profile needs at least two knots");
    }
    require_increasing(times.size(), [&](std::size_t i) { return times[i]; }, "sample times");
    for (double w : omegas) require_frequency(w);
    return FrequencyProfile(Sampled{std::move(times), std::move(omegas)});
}

double FrequencyProfile::operator()(double t) const {
    return std::visit(
        [t](const auto& rep) -> double {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return rep.omega;
            } else if constexpr (std::is_same_v<T, Piecewise>) {
                const auto& seg = rep.segments;
                auto it = std::upper_bound(seg.begin(), seg.end(), t,
                                           [](double v, const Segment& s) { return v < s.t_switch; });
                return it == seg.begin() ? seg.front().omega : std::prev(it)->omega;
            } else {
                if (t <= rep.times.front()) return rep.omegas.front();
                if (t >= rep.times.back()) return rep.omegas.back();
                std::size_t k = interval_index(rep.times, t);
                if (t == rep.times[k]) return rep.omegas[k];
                double w = (t - rep.times[k]) / (rep.times[k + 1] - rep.times[k]);
                return rep.omegas[k] + w * (rep.omegas[k + 1] - rep.omegas[k]);
            }
        },
        rep_);
}

double FrequencyProfile::derivative(double t) const {
    if (const auto* s = std::get_if<Sampled>(&rep_)) {
        if (t < s->times.front() || t >= s->times.back()) return 0.0;
        std::size_t k = interval_index(s->times, t);
        return (s->omegas[k + 1] - s->omegas[k]) / (s->times[k + 1] - s->times[k]);
    }
    return 0.0;
}

FrequencyProfile::Kind FrequencyProfile::kind() const {
    switch (rep_.index()) {
        case 0: return Kind::Constant;
        case 1: return Kind::PiecewiseConstant;
        default: return Kind::Sampled;
    }
}

bool FrequencyProfile::is_constant() const {
    return std::visit(
        [](const auto& rep) {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return true;
            } else if constexpr (std::is_same_v<T, Piecewise>) {
                return std::all_of(rep.segments.begin(), rep.segments.end(),
                                   [&](const Segment& s) { return s.omega == rep.segments.front().omega; });
            } else {
                return std::all_of(rep.omegas.begin(), rep.omegas.end(),
                                   [&](double w) { return w == rep.omegas.front(); });
            }
        },
        rep_);
}

double FrequencyProfile::constant_value() const {
    return std::visit(
        [](const auto& rep) {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return rep.omega;
            } else if constexpr (std::is_same_v<T, Piecewise>) {
                return rep.segments.front().omega;
            } else {
                return rep.omegas.front();
            }
        },
        rep_);
}

double FrequencyProfile::max_value() const {
    return std::visit(
        [](const auto& rep) {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return rep.omega;
            } else if constexpr (std::is_same_v<T, Piecewise>) {
                double m = 0.0;
                for (const auto& s : rep.segments) m = std::max(m, s.omega);
                return m;
            } else {
                return *std::max_element(rep.omegas.begin(), rep.omegas.end());
            }
        },
        rep_);
}

std::vector<double> FrequencyProfile::breakpoints() const {
    std::vector<double> out;
    if (const auto* p = std::get_if<Piecewise>(&rep_)) {
        for (std::size_t i = 1; i < p->segments.size(); ++i) {
            if (p->segments[i].omega != p->segments[i - 1].omega) out.push_back(p->segments[i].t_switch);
        }
    } else if (const auto* s = std::get_if<Sampled>(&rep_)) {
        out = s->times;
    }
    return out;
}

FrequencyProfile FrequencyProfile::shifted(double offset) const {
    return std::visit(
        [offset](const auto& rep) -> FrequencyProfile {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return FrequencyProfile(rep);
            } else if constexpr (std::is_same_v<T, Piecewise>) {
                auto seg = rep.segments;
                for (auto& s : seg) s.t_switch -= offset;
                return FrequencyProfile(Piecewise{std::move(seg)});
            } else {
                auto times = rep.times;
                for (auto& t : times) t -= offset;
                return FrequencyProfile(Sampled{std::move(times), rep.omegas});
            }
        },
        rep_);
}

const std::vector<FrequencyProfile::Segment>& FrequencyProfile::segments() const {
    if (const auto* p = std::get_if<Piecewise>(&rep_)) return p->segments;
    return kNoSegments;
}

const std::vector<double>& FrequencyProfile::sample_times() const {
    if (const auto* s = std::get_if<Sampled>(&rep_)) return s->times;
    return kNoSamples;
}

const std::vector<double>& FrequencyProfile::sample_values() const {
    if (const auto* s = std::get_if<Sampled>(&rep_)) return s->omegas;
    return kNoSamples;
}

}  // namespace ricdyn

#pragma once
// Scheme identifiers used by experiment configuration:
//   original | normal:<sigma> | uniform[:<half_width>] | random-uniform | random-normal
// each optionally suffixed with "+uniform-priors".

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dxsens/network.hpp"
#include "dxsens/perturbation.hpp"

namespace dxsens {

enum class SchemeKind { original, noise, random };

struct Scheme {
    SchemeKind kind = SchemeKind::original;
    NoiseSpec noise;
    RandomizationSpec randomization;
    bool uniform_priors = false;
    std::string id = "original";

    bool is_plain_original() const { return kind == SchemeKind::original && !uniform_priors; }

    template <std::uniform_random_bit_generator Gen>
    Network apply(const Network& net, Gen& gen) const {
        Network out = [&] {
            switch (kind) {
                case SchemeKind::noise: return add_noise(net, noise, gen);
                case SchemeKind::random: return randomize_parameters(net, randomization, gen);
                case SchemeKind::original: break;
            }
            return net;
        }();
        return uniform_priors ? set_uniform_priors(out) : out;
    }
};

namespace detail {

inline double parse_nonnegative(std::string_view text, std::string_view what) {
    std::string buf(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(buf, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (buf.empty() || used != buf.size() || !std::isfinite(value) || value < 0.0)
        throw std::invalid_argument(std::string(what) + " must be a non-negative number, got '" + buf + "'");
    return value;
}

}  // namespace detail

inline Scheme parse_scheme(std::string_view text) {
    constexpr std::string_view suffix = "+uniform-priors";
    Scheme s;
    s.id = std::string(text);
    std::string_view body = text;
    if (body.size() >= suffix.size() && body.substr(body.size() - suffix.size()) == suffix) {
        s.uniform_priors = true;
        body.remove_suffix(suffix.size());
    }
    if (body == "original") {
        s.kind = SchemeKind::original;
    } else if (body.starts_with("normal:")) {
        s.kind = SchemeKind::noise;
        s.noise = NoiseSpec::normal(detail::parse_nonnegative(body.substr(7), "normal sigma"));
    } else if (body == "uniform") {
        s.kind = SchemeKind::noise;
        s.noise = NoiseSpec::uniform();
    } else if (body.starts_with("uniform:")) {
        s.kind = SchemeKind::noise;
        s.noise = NoiseSpec::uniform(detail::parse_nonnegative(body.substr(8), "uniform half-width"));
    } else if (body == "random-uniform") {
        s.kind = SchemeKind::random;
        s.randomization.distribution = RandomDistribution::uniform;
    } else if (body == "random-normal") {
        s.kind = SchemeKind::random;
        s.randomization.distribution = RandomDistribution::normal;
    } else {
        throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
    }
    return s;
}

inline std::vector<Scheme> parse_scheme_list(std::string_view comma_list) {
    std::vector<Scheme> out;
    while (!comma_list.empty()) {
        const auto comma = comma_list.find(',');
        std::string_view item = comma_list.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.push_back(parse_scheme(item));
        if (comma == std::string_view::npos) break;
        comma_list.remove_prefix(comma + 1);
    }
    if (out.empty()) throw std::invalid_argument("scheme list is empty");
    return out;
}

// Original network, the six normal-noise levels, then uniform noise.
inline std::vector<std::string> standard_scheme_ladder() {
    return {"original",     "normal:0.005", "normal:0.01", "normal:0.025",
            "normal:0.05",  "normal:0.1",   "normal:0.25", "uniform:0.5"};
}

}  // namespace dxsens

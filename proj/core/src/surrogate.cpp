#include "hpland/surrogate.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "hpland/errors.hpp"
#include "hpland/rng.hpp"

namespace hpland {

namespace {

constexpr std::uint64_t kEvalStreamTag = 0x73757272656e64ULL;
constexpr std::uint64_t kSeedOffsetTag = 0x6f666673657431ULL;

// Serialized state layout (little-endian): "HLS1" magic, skill f64, step
// i64, train seed u64, dim u32, unit coordinates dim x f64.
constexpr char kMagic[4] = {'H', 'L', 'S', '1'};

void put_u64(OpaqueState& out, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::byte>((value >> (8 * i)) & 0xff));
    }
}

void put_u32(OpaqueState& out, std::uint32_t value) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::byte>((value >> (8 * i)) & 0xff));
    }
}

void put_f64(OpaqueState& out, double value) { put_u64(out, std::bit_cast<std::uint64_t>(value)); }

std::uint64_t read_u64(const OpaqueState& in, std::size_t& offset) {
    if (offset + 8 > in.size()) {
        throw ValidationError("surrogate: truncated state");
    }
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) {
        value |= static_cast<std::uint64_t>(std::to_integer<std::uint8_t>(in[offset + i])) << (8 * i);
    }
    offset += 8;
    return value;
}

std::uint32_t read_u32(const OpaqueState& in, std::size_t& offset) {
    if (offset + 4 > in.size()) {
        throw ValidationError("surrogate: truncated state");
    }
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) {
        value |= static_cast<std::uint32_t>(std::to_integer<std::uint8_t>(in[offset + i])) << (8 * i);
    }
    offset += 4;
    return value;
}

double read_f64(const OpaqueState& in, std::size_t& offset) {
    return std::bit_cast<double>(read_u64(in, offset));
}

struct DecodedState {
    bool trained = false;
    double skill = 0.0;
    long long step = 0;
    std::uint64_t train_seed = 0;
    UnitVector coords;
};

DecodedState decode_state(const OpaqueState& state, std::size_t dimension) {
    DecodedState decoded;
    if (state.empty()) {
        return decoded;  // initial state: skill 0 at step 0
    }
    std::size_t offset = 0;
    if (state.size() < 4 || std::memcmp(state.data(), kMagic, 4) != 0) {
        throw ValidationError("surrogate: unrecognized state blob");
    }
    offset = 4;
    decoded.trained = true;
    decoded.skill = read_f64(state, offset);
    decoded.step = static_cast<long long>(read_u64(state, offset));
    decoded.train_seed = read_u64(state, offset);
    const std::uint32_t dim = read_u32(state, offset);
    if (dim != dimension) {
        throw ValidationError("surrogate: state dimension does not match the space");
    }
    decoded.coords.coords.resize(dim);
    for (std::uint32_t d = 0; d < dim; ++d) {
        decoded.coords.coords[d] = read_f64(state, offset);
    }
    if (offset != state.size()) {
        throw ValidationError("surrogate: trailing bytes in state blob");
    }
    return decoded;
}

OpaqueState encode_state(double skill, long long step, std::uint64_t train_seed,
                         const UnitVector& coords) {
    OpaqueState out;
    out.reserve(4 + 8 + 8 + 8 + 4 + 8 * coords.coords.size());
    for (char c : kMagic) {
        out.push_back(static_cast<std::byte>(c));
    }
    put_f64(out, skill);
    put_u64(out, static_cast<std::uint64_t>(step));
    put_u64(out, train_seed);
    put_u32(out, static_cast<std::uint32_t>(coords.coords.size()));
    for (double coord : coords.coords) {
        put_f64(out, coord);
    }
    return out;
}

// First phase whose end step is >= step; steps past the last window belong
// to the last phase.
std::size_t phase_for_step(const std::vector<long long>& ends, long long step) {
    for (std::size_t j = 0; j < ends.size(); ++j) {
        if (step <= ends[j]) {
            return j;
        }
    }
    return ends.size() - 1;
}

class SurrogateTrainable final : public Trainable {
public:
    explicit SurrogateTrainable(SurrogateSpec spec) : spec_(std::move(spec)) { validate(spec_); }

    OpaqueState train(const OpaqueState& state_in, const ConfigVector& config, std::uint64_t seed,
                      long long from_step, long long to_step) override {
        if (from_step < 0 || to_step < from_step) {
            throw ValidationError("surrogate: train window [" + std::to_string(from_step) + ", " +
                                  std::to_string(to_step) + ") is not ordered");
        }
        const DecodedState state = decode_state(state_in, spec_.space.dimension());
        if (state.step != from_step) {
            throw ValidationError("surrogate: state is at step " + std::to_string(state.step) +
                                  ", cannot resume from step " + std::to_string(from_step));
        }
        const UnitVector u = spec_.space.to_unit(config);

        // Skill gain: integral of the phase mean functions over the trained
        // window, normalized per phase window so a full window contributes
        // exactly its mean value. Additive over window subdivisions, which
        // keeps progressive training path-independent.
        double gain = 0.0;
        long long window_start = 0;
        for (std::size_t j = 0; j < spec_.phase_end_steps.size(); ++j) {
            const long long window_end = spec_.phase_end_steps[j];
            const long long lo = std::max(from_step, window_start);
            const long long hi = std::min(to_step, window_end);
            if (hi > lo) {
                const double fraction = static_cast<double>(hi - lo) /
                                        static_cast<double>(window_end - window_start);
                gain += fraction * surrogate_mean(spec_, j, u);
            }
            window_start = window_end;
        }
        return encode_state(state.skill + gain, to_step, seed, u);
    }

    std::vector<double> evaluate(const OpaqueState& state_in, std::uint64_t eval_seed,
                                 int episodes) override {
        if (episodes <= 0) {
            throw ValidationError("surrogate: episode count must be positive");
        }
        const DecodedState state = decode_state(state_in, spec_.space.dimension());
        if (!state.trained) {
            throw ValidationError("surrogate: cannot evaluate the initial state");
        }
        const std::size_t phase = phase_for_step(spec_.phase_end_steps, state.step);
        const double expectation = state.skill + surrogate_mean(spec_, phase, state.coords) +
                                   surrogate_seed_offset(spec_, state.coords, state.train_seed);
        RngStream rng(mix_seed({kEvalStreamTag, eval_seed}));
        std::vector<double> returns(static_cast<std::size_t>(episodes));
        for (double& value : returns) {
            value = expectation + spec_.noise_sigma * rng.normal();
        }
        return returns;
    }

private:
    SurrogateSpec spec_;
};

}  // namespace

void validate(const SurrogateSpec& spec) {
    const std::size_t n = spec.space.dimension();
    if (spec.phase_end_steps.empty()) {
        throw ValidationError("surrogate: no phase windows");
    }
    long long previous = 0;
    for (long long end : spec.phase_end_steps) {
        if (end <= previous) {
            throw ValidationError("surrogate: phase end steps must be strictly increasing and positive");
        }
        previous = end;
    }
    if (spec.phases.size() != spec.phase_end_steps.size()) {
        throw ValidationError("surrogate: " + std::to_string(spec.phases.size()) +
                              " phase mean functions for " +
                              std::to_string(spec.phase_end_steps.size()) + " phase windows");
    }
    for (const auto& phase : spec.phases) {
        if (!std::isfinite(phase.base)) {
            throw ValidationError("surrogate: non-finite phase base value");
        }
        for (const auto& bump : phase.bumps) {
            if (bump.center.coords.size() != n) {
                throw ValidationError("surrogate: bump center dimension does not match the space");
            }
            for (double coord : bump.center.coords) {
                if (!(coord >= 0.0 && coord <= 1.0)) {
                    throw ValidationError("surrogate: bump center outside the unit cube");
                }
            }
            if (!(bump.width > 0.0) || !std::isfinite(bump.width)) {
                throw ValidationError("surrogate: bump width must be positive");
            }
            if (!std::isfinite(bump.height)) {
                throw ValidationError("surrogate: non-finite bump height");
            }
        }
    }
    if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
        throw ValidationError("surrogate: noise_sigma must be finite and non-negative");
    }
    if (!(spec.seed_offset_scale >= 0.0) || !std::isfinite(spec.seed_offset_scale)) {
        throw ValidationError("surrogate: seed_offset_scale must be finite and non-negative");
    }
    if (spec.bimodal_region) {
        const auto& region = *spec.bimodal_region;
        if (region.low.coords.size() != n || region.high.coords.size() != n) {
            throw ValidationError("surrogate: bimodal region dimension does not match the space");
        }
        for (std::size_t d = 0; d < n; ++d) {
            const double lo = region.low.coords[d];
            const double hi = region.high.coords[d];
            if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
                throw ValidationError("surrogate: bimodal region must be an ordered box in the unit cube");
            }
        }
    }
}

double surrogate_mean(const SurrogateSpec& spec, std::size_t phase_ordinal, const UnitVector& u) {
    if (phase_ordinal >= spec.phases.size()) {
        throw ValidationError("surrogate: phase ordinal out of range");
    }
    if (u.coords.size() != spec.space.dimension()) {
        throw ValidationError("surrogate: point dimension does not match the space");
    }
    const SurrogatePhase& phase = spec.phases[phase_ordinal];
    double value = phase.base;
    for (const auto& bump : phase.bumps) {
        double sq = 0.0;
        for (std::size_t d = 0; d < u.coords.size(); ++d) {
            const double diff = u.coords[d] - bump.center.coords[d];
            sq += diff * diff;
        }
        value += bump.height * std::exp(-sq / (2.0 * bump.width * bump.width));
    }
    return value;
}

double surrogate_seed_offset(const SurrogateSpec& spec, const UnitVector& u, std::uint64_t seed) {
    if (spec.seed_offset_scale == 0.0) {
        return 0.0;
    }
    if (spec.bimodal_region) {
        const auto& region = *spec.bimodal_region;
        bool inside = true;
        for (std::size_t d = 0; d < u.coords.size() && inside; ++d) {
            inside = u.coords[d] >= region.low.coords[d] && u.coords[d] <= region.high.coords[d];
        }
        if (inside) {
            // Two clusters 2*scale apart, split by seed parity.
            return (seed % 2 == 0) ? spec.seed_offset_scale : -spec.seed_offset_scale;
        }
    }
    // Smooth per-seed shift: fixed hash of the seed mapped to [-1, 1].
    std::uint64_t state = seed ^ kSeedOffsetTag;
    const double unit = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    return spec.seed_offset_scale * (2.0 * unit - 1.0);
}

std::unique_ptr<Trainable> surrogate_trainable(SurrogateSpec spec) {
    return std::make_unique<SurrogateTrainable>(std::move(spec));
}

}  // namespace hpland

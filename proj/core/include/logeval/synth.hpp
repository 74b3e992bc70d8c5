#ifndef LOGEVAL_SYNTH_HPP
#define LOGEVAL_SYNTH_HPP

#include "logeval/corpus.hpp"

#include <cstdint>

namespace logeval::synth {

// SplitMix64: the generator is spelled out (rather than relying on a
// standard-library engine) so that corpora regenerate byte-identically from a
// seed on any platform or language.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform-enough integer in [0, bound); plain modulo, bias is irrelevant
    // for fixture generation and keeps the algorithm trivially portable.
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

    // Uniform double in [0, 1) from the top 53 bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

struct SynthSpec {
    std::size_t template_count = 5;   // >= 2
    std::size_t message_count = 100;  // >= 1
    double variable_rate = 0.3;       // probability a template token is a placeholder
    double noise_rate = 0.0;          // fraction of messages reassigned to a wrong event
    std::uint64_t seed = 1;
    std::string placeholder{kDefaultPlaceholder};
};

struct SynthResult {
    Corpus truth;   // the perfect parse of the generated messages
    Corpus parsed;  // truth with noise_rate of the records reassigned
};

// Deterministic: the same SynthSpec yields the same corpora, byte for byte.
// Throws UsageError when template_count < 2, message_count < 1, or a rate is
// outside [0, 1].
[[nodiscard]] SynthResult generate(const SynthSpec& spec);

} // namespace logeval::synth

#endif // LOGEVAL_SYNTH_HPP

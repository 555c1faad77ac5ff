#ifndef STREAMHW_TESTS_RANDOM_SPEC_HPP
#define STREAMHW_TESTS_RANDOM_SPEC_HPP

#include "streamhw/analyzer.hpp"
#include "streamhw/trace.hpp"

#include <random>
#include <string>

namespace streamhw::testing {

/// Small generator of well-formed specifications: typed inputs, event-based
/// and periodic outputs with offsets, holds and windows, plus triggers.
/// Candidates the analyzer rejects are discarded; `attempts` counts them.
struct GeneratedSpec {
  std::string source;
  AnalyzedSpec analyzed;
  int attempts = 0;
};

GeneratedSpec random_spec(std::mt19937_64& rng);

/// CSV trace text for `spec`: `events` rows with random presence and values.
/// Offline rows carry millisecond timestamps, some on deadline instants;
/// online rows carry sclk ticks.
std::string random_trace(std::mt19937_64& rng, const AnalyzedSpec& spec, Mode mode, int events);

std::string corpus_path(const std::string& file);
std::string read_file(const std::string& path);

}  // namespace streamhw::testing

#endif

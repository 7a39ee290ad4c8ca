#pragma once

#include <random>
#include <string>
#include <vector>

#include "pql/petri.hpp"

namespace pql {

struct GeneratorOptions {
  std::size_t max_transitions = 8;
  std::size_t max_places = 10;
  bool cyclic = false;                  // allow loop insertion
  std::vector<std::string> alphabet{"A", "B", "C", "D", "E", "F"};
  double silent_ratio = 0.1;
};

// Random sound workflow net grown from i -> t -> o by soundness-preserving
// refinements (sequence, choice, parallel place, loop).
NetSystem random_sound_net(std::mt19937_64& rng, const GeneratorOptions& options = {});

}  // namespace pql

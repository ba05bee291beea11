#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noncross/rng.hpp"
#include "noncross/tensor.hpp"

namespace ncx {

// One training flow: x0 from the target mixture, x1 from the source
// (standard Gaussian). In epsilon-prediction mode x1 doubles as the noise.
struct FlowPair {
  Tensor x0;
  Tensor x1;
};

struct DatasetSpec {
  std::string name = "two_gaussians";
  int ring_k = 6;
};

int dataset_dim(const DatasetSpec& spec);
// Mixture mode centers; OOD distances are measured against these.
std::vector<Tensor> dataset_modes(const DatasetSpec& spec);
// Within-mode standard deviation; the OOD radius defaults to 3x this.
double dataset_mode_sigma(const DatasetSpec& spec);

Tensor draw_x0(const DatasetSpec& spec, Rng& rng);
FlowPair draw_pair(const DatasetSpec& spec, Rng& rng);
// Bitwise-reproducible: pair i comes from substream derive(seed, tag, i).
std::vector<FlowPair> generate_dataset(const DatasetSpec& spec, int n, std::uint64_t seed);

}  // namespace ncx

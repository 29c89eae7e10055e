#pragma once

#include "qce/random.hpp"

#include <vector>

namespace qce {

enum class ChannelKind { cptp, unital, subunital, instrument_element };

struct Channel {
  std::vector<CMatrix> kraus;
  ChannelKind kind = ChannelKind::cptp;
  int dim_in = 0;
  int dim_out = 0;

  CMatrix apply(const CMatrix& rho) const;
  CMatrix sum_kdk() const;  // sum K^dag K
  CMatrix sum_kkd() const;  // sum K K^dag
};

Channel identity_channel(int dim);
Channel replacement_channel(const DensityMatrix& target, int dim_in);
Channel depolarizing_channel(double p);

// cptp: Stinespring isometry split into Kraus blocks.
// unital: mixture of Haar unitaries (dim_out must equal dim_in).
// subunital: mixture of random isometries into dim_out >= dim_in.
Channel gen_channel(ChannelKind kind, int dim_in, int dim_out, int n_kraus, Rng& rng);

// Trace-nonincreasing pieces of one random cptp map, summing to it.
std::vector<Channel> gen_instrument(int dim_in, int dim_out, int branches, int n_kraus, Rng& rng);

// (M (x) N)(rho) on a bipartite input of local dims (dim_a, dim_b).
CMatrix apply_product(const Channel& m, const Channel& n, const CMatrix& rho);

}  // namespace qce

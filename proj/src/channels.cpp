#include "qce/channels.hpp"

#include <cmath>

namespace qce {

CMatrix Channel::apply(const CMatrix& rho) const {
  if (rho.rows() != dim_in) throw DimensionError("Channel::apply: input dimension mismatch");
  CMatrix out = CMatrix::Zero(dim_out, dim_out);
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return hermitize(out);
}

CMatrix Channel::sum_kdk() const {
  CMatrix s = CMatrix::Zero(dim_in, dim_in);
  for (const auto& k : kraus) s += k.adjoint() * k;
  return s;
}

CMatrix Channel::sum_kkd() const {
  CMatrix s = CMatrix::Zero(dim_out, dim_out);
  for (const auto& k : kraus) s += k * k.adjoint();
  return s;
}

Channel identity_channel(int dim) {
  return {{CMatrix::Identity(dim, dim)}, ChannelKind::unital, dim, dim};
}

Channel replacement_channel(const DensityMatrix& target, int dim_in) {
  const Eigh e = eigh(target.matrix());
  Channel c{{}, ChannelKind::cptp, dim_in, target.dim()};
  for (int i = 0; i < e.values.size(); ++i) {
    if (e.values(i) <= 0.0) continue;
    for (int j = 0; j < dim_in; ++j) {
      c.kraus.push_back(std::sqrt(e.values(i)) * e.vectors.col(i) *
                        CMatrix::Identity(dim_in, dim_in).row(j));
    }
  }
  return c;
}

Channel depolarizing_channel(double p) {
  CMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  z << 1, 0, 0, -1;
  const double w = std::sqrt(p / 4.0);
  return {{std::sqrt(1.0 - 3.0 * p / 4.0) * CMatrix::Identity(2, 2), w * x, w * y, w * z},
          ChannelKind::unital, 2, 2};
}

namespace {

std::vector<double> random_weights(int n, Rng& rng) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = 0.05 + rng.uniform());
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

Channel gen_channel(ChannelKind kind, int dim_in, int dim_out, int n_kraus, Rng& rng) {
  if (dim_in < 1 || dim_out < 1 || n_kraus < 1) throw DimensionError("gen_channel: bad dims");
  Channel c{{}, kind, dim_in, dim_out};
  switch (kind) {
    case ChannelKind::cptp:
    case ChannelKind::instrument_element: {
      const CMatrix v = random_isometry(dim_out * n_kraus, dim_in, rng);
      for (int i = 0; i < n_kraus; ++i) c.kraus.push_back(v.block(i * dim_out, 0, dim_out, dim_in));
      c.kind = ChannelKind::cptp;
      break;
    }
    case ChannelKind::unital: {
      if (dim_in != dim_out) throw DimensionError("gen_channel: unital needs dim_in == dim_out");
      for (double w : random_weights(n_kraus, rng))
        c.kraus.push_back(std::sqrt(w) * random_unitary(dim_in, rng));
      break;
    }
    case ChannelKind::subunital: {
      if (dim_out < dim_in) throw DimensionError("gen_channel: subunital needs dim_out >= dim_in");
      for (double w : random_weights(n_kraus, rng))
        c.kraus.push_back(std::sqrt(w) * random_isometry(dim_out, dim_in, rng));
      break;
    }
  }
  return c;
}

std::vector<Channel> gen_instrument(int dim_in, int dim_out, int branches, int n_kraus,
                                    Rng& rng) {
  if (branches < 1 || n_kraus < branches) throw DimensionError("gen_instrument: need n_kraus >= branches");
  const Channel whole = gen_channel(ChannelKind::cptp, dim_in, dim_out, n_kraus, rng);
  std::vector<Channel> parts(branches, Channel{{}, ChannelKind::instrument_element, dim_in, dim_out});
  for (int i = 0; i < n_kraus; ++i) parts[i % branches].kraus.push_back(whole.kraus[i]);
  return parts;
}

CMatrix apply_product(const Channel& m, const Channel& n, const CMatrix& rho) {
  if (rho.rows() != m.dim_in * n.dim_in) throw DimensionError("apply_product: dimension mismatch");
  CMatrix out = CMatrix::Zero(m.dim_out * n.dim_out, m.dim_out * n.dim_out);
  for (const auto& k : m.kraus)
    for (const auto& l : n.kraus) {
      const CMatrix kl = kron(k, l);
      out += kl * rho * kl.adjoint();
    }
  return hermitize(out);
}

}  // namespace qce

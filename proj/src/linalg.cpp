#include "locsim/linalg.hpp"

#include <cmath>
#include <string>

namespace locsim {

TransitionMatrix::TransitionMatrix(int dim) : dim_(dim) {
  if (dim <= 0) throw StructureError("matrix dimension must be positive");
  a_.assign(static_cast<std::size_t>(dim) * dim, Cx{0.0, 0.0});
}

TransitionMatrix TransitionMatrix::identity(int dim) {
  TransitionMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = Cx{1.0, 0.0};
  return m;
}

TransitionMatrix TransitionMatrix::dagger() const {
  TransitionMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m.at(r, c) = std::conj(at(c, r));
  return m;
}

double TransitionMatrix::unitarity_defect() const {
  const TransitionMatrix p = dagger() * (*this);
  double worst = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) {
      const Cx want = (r == c) ? Cx{1.0, 0.0} : Cx{0.0, 0.0};
      worst = std::max(worst, std::abs(p.at(r, c) - want));
    }
  return worst;
}

double TransitionMatrix::max_abs_diff(const TransitionMatrix& other) const {
  if (other.dim_ != dim_) throw StructureError("dimension mismatch in max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i)
    worst = std::max(worst, std::abs(a_[i] - other.a_[i]));
  return worst;
}

TransitionMatrix operator*(const TransitionMatrix& lhs, const TransitionMatrix& rhs) {
  if (lhs.dim() != rhs.dim())
    throw StructureError("dimension mismatch in matrix product");
  const int d = lhs.dim();
  TransitionMatrix out(d);
  for (int r = 0; r < d; ++r)
    for (int k = 0; k < d; ++k) {
      const Cx v = lhs.at(r, k);
      if (v == Cx{0.0, 0.0}) continue;
      for (int c = 0; c < d; ++c) out.at(r, c) += v * rhs.at(k, c);
    }
  return out;
}

TransitionMatrix coupler_matrix(CouplerParams p) {
  if (!std::isfinite(p.eta) || p.eta < 0.0 || p.eta > 1.0)
    throw DomainError("coupler reflectivity must be in [0, 1], got " +
                      std::to_string(p.eta));
  const double t = std::sqrt(p.eta);
  const double r = std::sqrt(1.0 - p.eta);
  TransitionMatrix m(2);
  m.at(0, 0) = Cx{t, 0.0};
  m.at(0, 1) = Cx{0.0, r};
  m.at(1, 0) = Cx{0.0, r};
  m.at(1, 1) = Cx{t, 0.0};
  return m;
}

TransitionMatrix phase_matrix(PhaseSetting s) {
  if (!std::isfinite(s.phi)) throw DomainError("phase must be finite");
  TransitionMatrix m(1);
  m.at(0, 0) = Cx{std::cos(s.phi), std::sin(s.phi)};
  return m;
}

TransitionMatrix embed(const TransitionMatrix& elem, const std::vector<int>& modes,
                       int dim) {
  if (static_cast<int>(modes.size()) != elem.dim())
    throw StructureError("embed: element dimension does not match mode list");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i] < 0 || modes[i] >= dim)
      throw StructureError("embed: mode index " + std::to_string(modes[i]) +
                           " out of range for dimension " + std::to_string(dim));
    for (std::size_t j = i + 1; j < modes.size(); ++j)
      if (modes[i] == modes[j])
        throw StructureError("embed: repeated mode index " +
                             std::to_string(modes[i]));
  }
  TransitionMatrix m = TransitionMatrix::identity(dim);
  for (std::size_t r = 0; r < modes.size(); ++r) {
    m.at(modes[r], modes[r]) = Cx{0.0, 0.0};
    for (std::size_t c = 0; c < modes.size(); ++c)
      m.at(modes[r], modes[c]) = elem.at(static_cast<int>(r), static_cast<int>(c));
  }
  return m;
}

TransitionMatrix compose(const std::vector<TransitionMatrix>& elements) {
  if (elements.empty()) throw StructureError("compose: empty element list");
  TransitionMatrix acc = elements.front();
  for (std::size_t i = 1; i < elements.size(); ++i) {
    if (elements[i].dim() != acc.dim())
      throw StructureError("compose: dimension mismatch at element " +
                           std::to_string(i));
    acc = elements[i] * acc;  // later elements act after earlier ones
  }
  return acc;
}

TransitionMatrix chip_unitary(PhaseSetting s, ChipReflectivities etas) {
  for (double eta : {etas.eta1, etas.eta2, etas.eta3, etas.eta4})
    if (!std::isfinite(eta) || eta < 0.0 || eta > 1.0)
      throw DomainError("chip reflectivity must be in [0, 1]");
  const int d = 4;
  return compose({
      embed(coupler_matrix({etas.eta1}), {kChipInputA, 3}, d),  // splitter
      embed(coupler_matrix({etas.eta3}), {2, kPortE}, d),       // tap arm c -> e
      embed(phase_matrix(s), {3}, d),                           // heater arm d
      embed(coupler_matrix({etas.eta4}), {3, kPortF}, d),       // tap arm d -> f
      embed(coupler_matrix({etas.eta2}), {kPortG, kPortH}, d),  // recombiner
  });
}

OutputDistribution output_distribution(const TransitionMatrix& U, int input_mode) {
  if (input_mode < 0 || input_mode >= U.dim())
    throw StructureError("input mode " + std::to_string(input_mode) +
                         " out of range for dimension " + std::to_string(U.dim()));
  OutputDistribution d;
  d.amplitudes.reserve(U.dim());
  d.probabilities.reserve(U.dim());
  for (int r = 0; r < U.dim(); ++r) {
    const Cx a = U.at(r, input_mode);
    d.amplitudes.push_back(a);
    d.probabilities.push_back(std::norm(a));
  }
  return d;
}

}  // namespace locsim

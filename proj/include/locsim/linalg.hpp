#pragma once

#include <array>
#include <complex>
#include <vector>

#include "locsim/errors.hpp"

namespace locsim {

using Cx = std::complex<double>;

/// Reflectivity of a directional coupler: the fraction of power that stays
/// in the same waveguide.
struct CouplerParams {
  double eta = 0.5;
};

/// Relative phase in radians imparted by a phase shifter. Unbounded; only
/// its value mod 2*pi is observable.
struct PhaseSetting {
  double phi = 0.0;
};

/// Dense complex transition matrix over optical modes.
/// Rows index output modes, columns index input modes; the circuit acts on
/// an amplitude vector as out = U * in. All constructors in this module
/// produce unitary matrices (to within 1e-10). Immutable use after
/// construction is assumed; all operations are pure.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(int dim);
  static TransitionMatrix identity(int dim);

  int dim() const { return dim_; }

  Cx& at(int row, int col) { return a_[static_cast<std::size_t>(row) * dim_ + col]; }
  const Cx& at(int row, int col) const {
    return a_[static_cast<std::size_t>(row) * dim_ + col];
  }

  TransitionMatrix dagger() const;

  /// max |(U^dagger U - I)_ij|, the unitarity defect.
  double unitarity_defect() const;
  bool is_unitary(double tol = 1e-10) const { return unitarity_defect() < tol; }

  /// max entrywise |this - other|; dimensions must match.
  double max_abs_diff(const TransitionMatrix& other) const;

 private:
  int dim_;
  std::vector<Cx> a_;
};

/// Matrix product (left applied after right, as usual).
TransitionMatrix operator*(const TransitionMatrix& lhs, const TransitionMatrix& rhs);

/// 2x2 directional coupler:
///   [ sqrt(eta)        i sqrt(1-eta) ]
///   [ i sqrt(1-eta)    sqrt(eta)     ]
/// Throws DomainError unless 0 <= eta <= 1 and finite.
TransitionMatrix coupler_matrix(CouplerParams p);

/// 1x1 phase shifter [e^{i phi}]. Throws DomainError for non-finite phi.
TransitionMatrix phase_matrix(PhaseSetting s);

/// Lift a small element onto `modes` of a dim-mode space; identity elsewhere.
/// Entry (r, c) of `elem` lands at (modes[r], modes[c]).
/// Throws StructureError on index collisions, out-of-range indices, or a
/// size mismatch between `elem` and `modes`.
TransitionMatrix embed(const TransitionMatrix& elem, const std::vector<int>& modes,
                       int dim);

/// Product of circuit elements with the first element applied first:
/// compose({A, B, C}) = C * B * A. Throws StructureError on an empty list
/// or mismatched dimensions.
TransitionMatrix compose(const std::vector<TransitionMatrix>& elements);

/// Coupler reflectivities of the four-mode chip. eta1/eta2 are the
/// interferometer splitter and recombiner, eta3/eta4 the two monitor taps.
/// Design values: 1/2, 1/2, 1/3, 1/3.
struct ChipReflectivities {
  double eta1 = 0.5;
  double eta2 = 0.5;
  double eta3 = 1.0 / 3.0;
  double eta4 = 1.0 / 3.0;
};

/// Mode indices of the four-mode chip. Input port a (the source) is mode 2;
/// the heater arm d is mode 3. Output ports e, f, g, h are modes 0..3:
/// e and f are the phase-independent monitor taps, g and h the
/// interferometer fringe ports (h peaks at phi = 0).
inline constexpr int kChipInputA = 2;
inline constexpr int kPortE = 0;
inline constexpr int kPortF = 1;
inline constexpr int kPortG = 2;
inline constexpr int kPortH = 3;

/// The 4x4 unitary of the reconfigurable chip:
///
///   splitter DC1 on (2,3) -> tap DC3 on (2,0) -> phase on 3
///   -> tap DC4 on (3,1) -> recombiner DC2 on (2,3)
///
/// For light injected at mode 2 the output amplitudes on (e,f,g,h) are
///   ( i, i^2 e^{i phi}, -i e^{i phi/2} sin(phi/2), i e^{i phi/2} cos(phi/2) ) / sqrt(3)
/// at the design reflectivities, so P_e = P_f = 1/3 independent of phi,
/// P_g = sin^2(phi/2)/3 and P_h = cos^2(phi/2)/3.
TransitionMatrix chip_unitary(PhaseSetting s, ChipReflectivities etas = {});

/// Single-photon output state for light injected at one input mode.
struct OutputDistribution {
  std::vector<Cx> amplitudes;          // column of the unitary
  std::vector<double> probabilities;   // |amplitude|^2 per output mode
};

/// Extract the column of U for `input_mode` and its detection probabilities.
/// Throws StructureError for an out-of-range index.
OutputDistribution output_distribution(const TransitionMatrix& U, int input_mode);

}  // namespace locsim

#include "lrdmd/rb.hpp"
#include "lrdmd/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace lrdmd {
namespace {

using std::numbers::pi;
using CArray = Eigen::ArrayXcd;
using RArray = Eigen::ArrayXd;

// Real 2-D FFT on an n1 x N2 row-major grid; spectra are n1 x (N2/2 + 1).
class Fft2 {
 public:
  Fft2(int n1, int n2) : n1_(n1), n2_(n2), nh_(n2 / 2 + 1) {
    real_ = fftw_alloc_real(static_cast<std::size_t>(n1_ * n2_));
    spec_ = fftw_alloc_complex(static_cast<std::size_t>(n1_ * nh_));
    fwd_ = fftw_plan_dft_r2c_2d(n1_, n2_, real_, spec_, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_2d(n1_, n2_, spec_, real_, FFTW_ESTIMATE);
  }
  ~Fft2() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  Fft2(const Fft2&) = delete;
  Fft2& operator=(const Fft2&) = delete;

  Index spectral_size() const { return n1_ * nh_; }
  Index physical_size() const { return n1_ * n2_; }

  CArray forward(const RArray& f) {
    std::copy(f.data(), f.data() + physical_size(), real_);
    fftw_execute(fwd_);
    CArray out(spectral_size());
    auto* s = reinterpret_cast<std::complex<double>*>(spec_);
    std::copy(s, s + spectral_size(), out.data());
    return out;
  }

  RArray inverse(const CArray& h) {
    auto* s = reinterpret_cast<std::complex<double>*>(spec_);
    std::copy(h.data(), h.data() + spectral_size(), s);
    fftw_execute(inv_);
    RArray out(physical_size());
    const double scale = 1.0 / static_cast<double>(physical_size());
    for (Index i = 0; i < physical_size(); ++i) out(i) = real_[i] * scale;
    return out;
  }

 private:
  int n1_, n2_, nh_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
};

int signed_freq(int i, int n) { return i <= n / 2 - (n % 2 == 0 ? 1 : 0) ? i : i - n; }

// Spectral operators on the extended grid.
struct Operators {
  int n1, n2ext, nh;
  RArray kd1, kd2;    // derivative wavenumbers, Nyquist zeroed
  RArray ksq;         // |k|^2
  RArray invlap;      // -1/|k|^2, zero mode 0
  RArray dealias;     // 2/3 rule

  explicit Operators(const RBGrid& g)
      : n1(static_cast<int>(g.n1)), n2ext(static_cast<int>(2 * g.n2)), nh(n2ext / 2 + 1) {
    const Index size = static_cast<Index>(n1) * nh;
    kd1.resize(size);
    kd2.resize(size);
    ksq.resize(size);
    invlap.resize(size);
    dealias.resize(size);
    const double cut1 = (2.0 / 3.0) * (n1 / 2), cut2 = (2.0 / 3.0) * (n2ext / 2);
    for (int i = 0; i < n1; ++i) {
      const int f1 = signed_freq(i, n1);
      const double k1 = 2.0 * pi * f1;
      const bool nyq1 = (n1 % 2 == 0) && i == n1 / 2;
      for (int j = 0; j < nh; ++j) {
        const double k2 = pi * j;
        const bool nyq2 = (n2ext % 2 == 0) && j == n2ext / 2;
        const Index idx = static_cast<Index>(i) * nh + j;
        const double k1abs = nyq1 ? 2.0 * pi * (n1 / 2) : std::abs(k1);
        kd1(idx) = nyq1 ? 0.0 : k1;
        kd2(idx) = nyq2 ? 0.0 : k2;
        ksq(idx) = k1abs * k1abs + k2 * k2;
        invlap(idx) = ksq(idx) > 0.0 ? -1.0 / ksq(idx) : 0.0;
        const double a1 = nyq1 ? n1 / 2 : std::abs(f1);
        dealias(idx) = (a1 < cut1 && j < cut2) ? 1.0 : 0.0;
      }
    }
  }
};

class RBSolver {
 public:
  RBSolver(const RBConfig& cfg)
      : cfg_(cfg), ops_(cfg.grid), fft_(static_cast<int>(cfg.grid.n1), static_cast<int>(2 * cfg.grid.n2)) {
    const double h = cfg.dt;
    eb_half_ = (-cfg.prandtl * ops_.ksq * (h / 2)).exp();
    et_half_ = (-ops_.ksq * (h / 2)).exp();
  }

  // Extend an n1 x n2 block oddly to n1 x 2 n2 and transform.
  CArray to_spectral(const Eigen::Ref<const Vector>& field) {
    const Index n1 = cfg_.grid.n1, n2 = cfg_.grid.n2;
    RArray ext(n1 * 2 * n2);
    for (Index i = 0; i < n1; ++i)
      for (Index j = 0; j < n2; ++j) {
        const double v = field(i * n2 + j);
        ext(i * 2 * n2 + j) = v;
        ext(i * 2 * n2 + (2 * n2 - 1 - j)) = -v;
      }
    return fft_.forward(ext);
  }

  Vector to_physical(const CArray& h) {
    const Index n1 = cfg_.grid.n1, n2 = cfg_.grid.n2;
    const RArray ext = fft_.inverse(h);
    Vector out(n1 * n2);
    for (Index i = 0; i < n1; ++i)
      for (Index j = 0; j < n2; ++j) out(i * n2 + j) = ext(i * 2 * n2 + j);
    return out;
  }

  // -(v . grad f) for v = perp-grad lap^{-1} b, dealiased, in spectral space.
  CArray advection(const CArray& bh, const CArray& fh) {
    const Complex I(0.0, 1.0);
    const CArray psi = ops_.invlap * bh;
    const RArray v1 = fft_.inverse(I * ops_.kd2 * psi);
    const RArray v2 = fft_.inverse(-I * ops_.kd1 * psi);
    const RArray fx = fft_.inverse(I * ops_.kd1 * fh);
    const RArray fy = fft_.inverse(I * ops_.kd2 * fh);
    const RArray prod = v1 * fx + v2 * fy;
    return -(fft_.forward(prod) * ops_.dealias);
  }

  CArray tau_forcing(const CArray& bh) const {
    const Complex I(0.0, 1.0);
    return I * ops_.kd1 * ops_.invlap * bh;
  }

  void rhs(const CArray& bh, const CArray& th, CArray& nb, CArray& nt) {
    const Complex I(0.0, 1.0);
    nb = advection(bh, bh) + cfg_.prandtl * cfg_.rayleigh * I * ops_.kd1 * th;
    nt = advection(bh, th) + tau_forcing(bh);
  }

  // One integrating-factor RK4 step on both fields.
  void step(CArray& bh, CArray& th) {
    const double h = cfg_.dt;
    const RArray& Eb = eb_half_;
    const RArray& Et = et_half_;
    CArray a_b, a_t, c_b, c_t, d_b, d_t, e_b, e_t;
    rhs(bh, th, a_b, a_t);
    const CArray b2 = Eb * (bh + (h / 2) * a_b), t2 = Et * (th + (h / 2) * a_t);
    rhs(b2, t2, c_b, c_t);
    const CArray b3 = Eb * bh + (h / 2) * c_b, t3 = Et * th + (h / 2) * c_t;
    rhs(b3, t3, d_b, d_t);
    const CArray b4 = Eb * Eb * bh + h * Eb * d_b, t4 = Et * Et * th + h * Et * d_t;
    rhs(b4, t4, e_b, e_t);
    bh = Eb * Eb * bh + (h / 6) * (Eb * Eb * a_b + 2.0 * Eb * (c_b + d_b) + e_b);
    th = Et * Et * th + (h / 6) * (Et * Et * a_t + 2.0 * Et * (c_t + d_t) + e_t);
  }

  // tau step with b prescribed as b0h evolved by exp(-sigma |k|^2 t).
  void step_linear(const CArray& b0h, double t, CArray& th) {
    const double h = cfg_.dt;
    const RArray& Et = et_half_;
    auto nt = [&](const CArray& tau, double time) {
      const CArray bh = buoyancy_at(b0h, time);
      return CArray(advection(bh, tau) + tau_forcing(bh));
    };
    const CArray a = nt(th, t);
    const CArray c = nt(Et * (th + (h / 2) * a), t + h / 2);
    const CArray d = nt(Et * th + (h / 2) * c, t + h / 2);
    const CArray e = nt(Et * Et * th + h * Et * d, t + h);
    th = Et * Et * th + (h / 6) * (Et * Et * a + 2.0 * Et * (c + d) + e);
  }

  CArray buoyancy_at(const CArray& b0h, double t) const {
    return b0h * (-cfg_.prandtl * ops_.ksq * t).exp();
  }

 private:
  RBConfig cfg_;
  Operators ops_;
  Fft2 fft_;
  RArray eb_half_, et_half_;
};

void validate(const RBConfig& cfg, Index samples) {
  if (cfg.grid.n1 < 2 || cfg.grid.n2 < 2) throw InvalidInput("RB grid too small");
  if (!(cfg.dt > 0.0) || cfg.sample_stride < 1) throw InvalidInput("RB time step and stride must be positive");
  if (!(cfg.prandtl > 0.0) || !std::isfinite(cfg.rayleigh)) throw InvalidInput("RB parameters invalid");
  if (samples < 1) throw InvalidInput("RB sample count must be positive");
}

bool finite(const CArray& a) { return a.allFinite(); }

}  // namespace

double rb_perturbation_mode(int j, double s1, double s2) {
  switch (j) {
    case 0: return std::sin(pi * s2);
    case 1: return std::sin(2 * pi * s1) * std::sin(pi * s2);
    case 2: return std::cos(2 * pi * s1) * std::sin(2 * pi * s2);
    case 3: return std::sin(2 * pi * s1) * std::sin(2 * pi * s2);
    case 4: return std::sin(3 * pi * s2);
    case 5: return std::cos(2 * pi * s1) * std::sin(3 * pi * s2);
    default: throw InvalidInput("perturbation mode index out of range");
  }
}

Vector lorenz_init(const InitCondition& ic, const RBGrid& grid) {
  const Index np = grid.points();
  Vector x(2 * np);
  for (Index i = 0; i < grid.n1; ++i) {
    const double s1 = grid.s1(i);
    for (Index j = 0; j < grid.n2; ++j) {
      const double s2 = grid.s2(j);
      const Index idx = i * grid.n2 + j;
      x(idx) = ic.kappa_b * std::sin(ic.a_b * s1) * std::sin(pi * s2);
      double tau = ic.kappa_tau1 * std::cos(ic.a_tau * s1) * std::sin(pi * s2) -
                   ic.kappa_tau2 * std::sin(2 * pi * s2);
      for (int p = 0; p < rb_perturbation_modes; ++p)
        if (ic.perturbation[static_cast<std::size_t>(p)] != 0.0)
          tau += ic.perturbation[static_cast<std::size_t>(p)] * rb_perturbation_mode(p, s1, s2);
      x(np + idx) = tau;
    }
  }
  return x;
}

Matrix simulate_rb(const RBConfig& cfg, const InitCondition& ic, Index samples) {
  validate(cfg, samples);
  RBSolver solver(cfg);
  const Index np = cfg.grid.points();
  const Vector x0 = lorenz_init(ic, cfg.grid);
  if (!x0.allFinite()) throw InvalidInput("initial condition is not finite");

  Matrix out(2 * np, samples);
  out.col(0) = x0;
  CArray bh = solver.to_spectral(x0.head(np));
  CArray th = solver.to_spectral(x0.tail(np));
  std::size_t step = 0;
  for (Index s = 1; s < samples; ++s) {
    for (Index k = 0; k < cfg.sample_stride; ++k) {
      solver.step(bh, th);
      ++step;
      if (!finite(bh) || !finite(th)) throw SimulationBlowup(step, "Rayleigh-Benard state became non-finite");
    }
    out.col(s).head(np) = solver.to_physical(bh);
    out.col(s).tail(np) = solver.to_physical(th);
  }
  return out;
}

Matrix simulate_rb_linear(const RBConfig& cfg, const InitCondition& ic, Index samples) {
  validate(cfg, samples);
  RBSolver solver(cfg);
  const Index np = cfg.grid.points();
  const Vector x0 = lorenz_init(ic, cfg.grid);
  if (!x0.allFinite()) throw InvalidInput("initial condition is not finite");

  Matrix out(2 * np, samples);
  out.col(0) = x0;
  const CArray b0h = solver.to_spectral(x0.head(np));
  CArray th = solver.to_spectral(x0.tail(np));
  std::size_t step = 0;
  for (Index s = 1; s < samples; ++s) {
    for (Index k = 0; k < cfg.sample_stride; ++k) {
      solver.step_linear(b0h, static_cast<double>(step) * cfg.dt, th);
      ++step;
      if (!finite(th)) throw SimulationBlowup(step, "linear Rayleigh-Benard state became non-finite");
    }
    out.col(s).head(np) = solver.to_physical(solver.buoyancy_at(b0h, static_cast<double>(step) * cfg.dt));
    out.col(s).tail(np) = solver.to_physical(th);
  }
  return out;
}

double taylor_vortex_amplitude(double prandtl, double a_b) { return 1.0 / (prandtl * (pi * a_b) * (pi * a_b)); }

Vector taylor_vortex_buoyancy(const RBConfig& cfg, const InitCondition& ic, double t) {
  const double rate = cfg.prandtl * (ic.a_b * ic.a_b + pi * pi);
  const double amp = ic.kappa_b * std::exp(-rate * t);
  Vector b(cfg.grid.points());
  for (Index i = 0; i < cfg.grid.n1; ++i)
    for (Index j = 0; j < cfg.grid.n2; ++j)
      b(i * cfg.grid.n2 + j) = amp * std::sin(ic.a_b * cfg.grid.s1(i)) * std::sin(pi * cfg.grid.s2(j));
  return b;
}

std::string rb_scheme_description() {
  return "pseudo-spectral (FFT, 2/3 dealiasing, odd extension in s2), integrating-factor RK4";
}

}  // namespace lrdmd

// m1sim: batch front end for the M1 lattice model and its Rydberg simulator.
// Subcommands write figure-ready CSV tables plus a JSON metadata sidecar.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "m1sim/analytic.hpp"
#include "m1sim/dressing.hpp"
#include "m1sim/io.hpp"
#include "m1sim/kinkdyn.hpp"
#include "m1sim/operators.hpp"
#include "m1sim/spectra.hpp"

using namespace m1sim;
using kernels::cplx;

namespace {

constexpr const char* kVersion = "m1sim 1.0.0";
constexpr double kPi = std::numbers::pi;

struct Output {
  std::string dir = ".";
  std::string name;  // stem; .csv/.json appended
  std::map<std::string, std::string> config;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  std::string path(const std::string& ext, const std::string& suffix = "") const {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / (name + suffix + ext)).string();
  }
  void write(const io::Table& table, const std::string& command,
             const std::map<std::string, std::string>& extra = {},
             const std::string& suffix = "") const {
    io::write_csv(path(".csv", suffix), table);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::map<std::string, std::string> meta = extra;
    meta["version"] = kVersion;
    meta["kernel_backend"] = kernels::active_backend();
    io::write_metadata(path(".json", suffix), command, config, meta, wall);
  }
};

std::string fstr(double v) { return io::format_value(v, 17); }
std::string fshort(double v) { return io::format_value(v, 6); }

Staggering make_pattern(int L, const std::string& pattern, double lambda) {
  if (pattern == "11l") return stagger_11l(L, lambda);
  if (pattern == "1l1") return stagger_1l1(L, lambda);
  if (pattern == "l11") return stagger_l11(L, lambda);
  throw std::invalid_argument("pattern must be one of 11l, 1l1, l11");
}

DressingLayer layer_from(double omega_mhz, double delta_over_omega, double c6_ghz) {
  DressingLayer l;
  l.omega = angular(omega_mhz * 1e6);
  l.delta = delta_over_omega * l.omega;
  l.c6 = c6_ghz * 1e9;
  return l;
}

// Frequency-like inputs accept Hz/kHz/MHz/GHz suffixes; a bare number is read
// in the option's natural unit (MHz for Rabi frequencies, GHz um^6 for C6).
double parse_in_unit(const std::string& s, double natural_unit_hz) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  std::string unit = s.substr(pos);
  while (!unit.empty() && unit.front() == ' ') unit.erase(unit.begin());
  if (unit.empty()) return v;
  double scale = 0.0;
  if (unit == "Hz") scale = 1.0;
  else if (unit == "kHz") scale = 1e3;
  else if (unit == "MHz") scale = 1e6;
  else if (unit == "GHz") scale = 1e9;
  else throw std::invalid_argument("unknown frequency suffix: " + unit);
  return v * scale / natural_unit_hz;
}


// ---------------------------------------------------------------- spectrum

void run_spectrum(Output out, int L, int n, double lambda, const std::string& pattern,
                  const std::string& boundary, int k_lowest) {
  const Boundary b = boundary == "periodic" ? Boundary::periodic : Boundary::open;
  HilbertSpace sp = enumerate_space(L, n, b, true);
  SparseMatrix h = build_hq(sp, make_pattern(L, pattern, lambda));
  DiagOptions opts;
  opts.k_lowest = k_lowest;
  Spectrum s = diagonalize(h, opts);
  io::Table t;
  t.comments = {"sector spectrum of H_Q",
                "L=" + std::to_string(L) + " n=" + std::to_string(n) + " lambda=" +
                    fshort(lambda) + " pattern=" + pattern + " boundary=" + boundary,
                "dim=" + std::to_string(sp.dim())};
  t.columns = {"k", "energy"};
  t.data.resize(2);
  for (int k = 0; k < s.count(); ++k) {
    t.data[0].push_back(k + 1);
    t.data[1].push_back(s.energies[k]);
  }
  out.write(t, "spectrum",
            {{"dim", std::to_string(sp.dim())},
             {"max_residual", fstr(s.count() == sp.dim() ? s.max_residual(h) : -1.0)}});
}

// ---------------------------------------------------------------- densities

void run_densities(Output out, int l, double lambda, double cft_a) {
  DensityProfile ed = ground_state_densities(l, lambda, /*with_energy=*/true);
  DensityProfile cft = cft_densities(3 * l, cft_a);
  io::Table t;
  t.comments = {"ground-state particle densities, open chain L=3l, pattern 1 lambda 1",
                "l=" + std::to_string(l) + " lambda=" + fshort(lambda),
                "cft column uses A=" + fshort(cft_a) + ", valid for x in [2, L]"};
  t.columns = {"site", "n_ed", "h_ed", "n_cft"};
  t.data.resize(4);
  for (int i = 1; i <= 3 * l; ++i) {
    t.data[0].push_back(i);
    t.data[1].push_back(ed.site_densities[i - 1]);
    t.data[2].push_back(ed.energy_densities[i - 1]);
    t.data[3].push_back(cft.site_densities[i - 1]);
  }
  out.write(t, "densities");
}

// ---------------------------------------------------------------- kink profile

void run_kink_profile(Output out, int l, double lambda, int j, bool skink) {
  const int L = 3 * l + 1;
  KinkBasis basis = extract_kink_band(l, lambda, skink);
  HilbertSpace sp = enumerate_space(L, l + (skink ? 1 : 0));
  const Staggering st = stagger_11l(L, lambda);
  io::Table t;
  t.comments = {std::string(skink ? "skink" : "kink") + " particle and energy densities",
                "l=" + std::to_string(l) + " lambda=" + fshort(lambda) +
                    " j=" + std::to_string(j)};
  t.columns = {"site", "density", "energy_density"};
  t.data.resize(3);
  std::vector<double> kj(basis.kink(j).begin(), basis.kink(j).end());
  for (int i = 1; i <= L; ++i) {
    const std::vector<double> nd = number_diagonal(sp, i);
    double dens = 0.0;
    for (int a = 0; a < sp.dim(); ++a) dens += nd[a] * kj[a] * kj[a];
    SparseMatrix hi = build_local_energy(sp, st, i);
    auto hv = hi.apply(std::span<const double>(kj));
    double e = 0.0;
    for (int a = 0; a < sp.dim(); ++a) e += kj[a] * hv[a];
    t.data[0].push_back(i);
    t.data[1].push_back(dens);
    t.data[2].push_back(e);
  }
  out.write(t, "kink-profile", {{"tracking_quality", fstr(basis.tracking_quality)}});
}

// ---------------------------------------------------------------- quench

std::vector<double> projected_kink_ground_state(int L, int n, double lambda) {
  HilbertSpace sp = enumerate_space(L, n, Boundary::open, true);
  SparseMatrix h = build_hq(sp, stagger_11l(L, lambda));
  std::vector<int> keep;
  for (int i = 0; i < sp.dim(); ++i)
    if (!(sp.states[i] & 0b11u)) keep.push_back(i);
  SparseBuilder sub(static_cast<int>(keep.size()), static_cast<int>(keep.size()));
  std::vector<int> where(sp.dim(), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) where[keep[k]] = static_cast<int>(k);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    auto cols = h.row_cols(keep[k]);
    auto vals = h.row_vals(keep[k]);
    for (std::size_t p = 0; p < cols.size(); ++p)
      if (where[cols[p]] >= 0) sub.add(static_cast<int>(k), where[cols[p]], vals[p]);
  }
  Spectrum s = diagonalize(sub.build());
  std::vector<double> outv(sp.dim(), 0.0);
  for (std::size_t k = 0; k < keep.size(); ++k) outv[keep[k]] = s.vec(0)[k];
  return outv;
}

std::vector<double> skink_pinned_ground_state(int L, int n, double lambda) {
  HilbertSpace sp = enumerate_space(L, n, Boundary::open, true);
  SparseMatrix h = build_hq(sp, stagger_11l(L, lambda));
  std::vector<double> d(sp.dim(), 0.0);
  auto n1 = number_diagonal(sp, 1), n2 = number_diagonal(sp, 2), n3 = number_diagonal(sp, 3);
  for (int i = 0; i < sp.dim(); ++i) d[i] = 3.0 * (-n1[i] + n2[i] - 0.5 * n3[i]);
  Spectrum s = diagonalize(add(h, SparseMatrix::diagonal(d)));
  return {s.vec(0).begin(), s.vec(0).end()};
}

void run_quench(Output out, int l, double lambda, const std::string& init, double t_max,
                double dt) {
  const bool skink = init == "skink" || init == "prepared-skink";
  const bool prepared = init == "prepared" || init == "prepared-skink";
  if (init != "exact-kink" && init != "prepared" && init != "skink" && init != "prepared-skink")
    throw std::invalid_argument("init must be exact-kink | prepared | skink | prepared-skink");
  const int L = 3 * l + 1;
  const int n = l + (skink ? 1 : 0);
  KinkBasis basis = extract_kink_band(l, lambda, skink);
  HilbertSpace sp = enumerate_space(L, n);
  Spectrum full = diagonalize(build_hq(sp, stagger_11l(L, lambda)));
  const ObservableKind kind = skink ? ObservableKind::dnbar : ObservableKind::dn;
  std::vector<double> site_sum = observable_site_sum(kind, sp);
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < sp.dim(); ++i) {
    m1 += site_sum[i] * basis.kink(1)[i] * basis.kink(1)[i];
    m2 += site_sum[i] * basis.kink(l + 1)[i] * basis.kink(l + 1)[i];
  }
  ObservableFit fit = fit_observable_coeffs(kind, m1, m2);
  if (!fit.ok) throw std::runtime_error("quench: detector fit is singular");

  std::vector<double> psi0_r;
  if (!prepared) {
    psi0_r.assign(basis.kink(1).begin(), basis.kink(1).end());
  } else {
    psi0_r = skink ? skink_pinned_ground_state(L, n, lambda)
                   : projected_kink_ground_state(L, n, lambda);
  }
  std::vector<cplx> psi0(sp.dim()), target(sp.dim());
  for (int i = 0; i < sp.dim(); ++i) {
    psi0[i] = psi0_r[i];
    target[i] = basis.kink(l + 1)[i];
  }
  std::vector<double> times;
  for (double t = 0.0; t <= t_max + 1e-12; t += dt) times.push_back(t);
  QuenchSeries series = propagate_eigen(full, psi0, times, {{"sum", site_sum}}, target);
  std::vector<cplx> closed = overlap_amplitude(basis, times);

  const double vf = fermi_velocity();
  io::Table t;
  t.comments = {"quench from " + init + " under H_Q",
                "l=" + std::to_string(l) + " lambda=" + fshort(lambda),
                "detector " + std::string(skink ? "dnbar" : "dn") + ": alpha=" +
                    fshort(fit.alpha) + " beta=" + fshort(fit.beta)};
  t.columns = {"t_J", "t_vf_over_l", "overlap_sq", "detector", "overlap_sq_closed_form"};
  t.data.resize(5);
  for (std::size_t i = 0; i < times.size(); ++i) {
    t.data[0].push_back(times[i]);
    t.data[1].push_back(times[i] * vf / l);
    t.data[2].push_back(series.overlap_sq[i]);
    t.data[3].push_back(
        observable_value(kind, fit.alpha, fit.beta, series.observables["sum"][i]));
    t.data[4].push_back(std::norm(closed[i]));
  }
  out.write(t, "quench",
            {{"alpha", fstr(fit.alpha)},
             {"beta", fstr(fit.beta)},
             {"norm_drift", fstr(series.norm_drift)},
             {"tracking_quality", fstr(basis.tracking_quality)}});
}

// ---------------------------------------------------------------- saddle

void run_saddle(Output out, int l, double lambda, int smax, double x_min, double x_max,
                int npts) {
  const double vm = v_max(lambda);
  if (vm <= 0.0)
    throw std::invalid_argument("saddle: the band is flat at lambda=0, nothing propagates");
  io::Table t;
  t.comments = {"saddle-point approximation vs continuum overlap sum",
                "l=" + std::to_string(l) + " lambda=" + fshort(lambda) + " v_max=" + fshort(vm),
                "x = t v_max / l"};
  t.columns = {"x", "t_J", "o2_continuum", "o2_saddle", "o2_saddle_s1"};
  t.data.resize(5);
  std::vector<double> ts(npts);
  for (int i = 0; i < npts; ++i) {
    const double x = x_min + (x_max - x_min) * i / (npts - 1);
    ts[i] = x * l / vm;
  }
  std::vector<cplx> cont = overlap_continuum(l, lambda, ts);
  for (int i = 0; i < npts; ++i) {
    t.data[0].push_back(ts[i] * vm / l);
    t.data[1].push_back(ts[i]);
    t.data[2].push_back(std::norm(cont[i]));
    t.data[3].push_back(std::norm(saddle_overlap(l, lambda, ts[i], smax)));
    t.data[4].push_back(std::norm(saddle_overlap(l, lambda, ts[i], 1)));
  }
  out.write(t, "saddle", {{"v_max", fstr(vm)}});
}

// ---------------------------------------------------------------- dispersion

void run_dispersion(Output out, std::vector<double> lambdas, int npts, int exact_l) {
  io::Table t;
  t.comments = {"continuum kink dispersion and group velocity"};
  t.columns = {"ktilde"};
  t.data.resize(1 + 2 * lambdas.size());
  std::map<std::string, std::string> extra;
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    t.columns.push_back("E_lambda" + fshort(lambdas[li]));
    t.columns.push_back("v_lambda" + fshort(lambdas[li]));
    const Dispersion d = make_dispersion(lambdas[li]);
    extra["gap_lambda" + fshort(lambdas[li])] = fstr(d.gap());
    extra["vmax_lambda" + fshort(lambdas[li])] = fstr(v_max(lambdas[li]));
  }
  for (int i = 0; i < npts; ++i) {
    const double k = kPi * i / (npts - 1);
    t.data[0].push_back(k);
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      const Dispersion d = make_dispersion(lambdas[li]);
      t.data[1 + 2 * li].push_back(d.energy(k));
      t.data[2 + 2 * li].push_back(d.deriv(k));
    }
  }
  out.write(t, "dispersion", extra);
  if (exact_l > 0) {
    KinkBasis basis = extract_kink_band(exact_l, 1.0);
    io::Table ex;
    ex.comments = {"exact band eigenenergies at criticality, l=" + std::to_string(exact_l)};
    ex.columns = {"ktilde", "energy"};
    ex.data.resize(2);
    for (int k = 1; k <= exact_l + 1; ++k) {
      ex.data[0].push_back(kPi * k / (exact_l + 2));
      ex.data[1].push_back(basis.energies[k - 1]);
    }
    out.write(ex, "dispersion", {}, "_exact");
  }
}

// ---------------------------------------------------------------- prepare

void run_prepare(Output out, int l, double lambda, bool skink, std::vector<double> t_grid,
                 double dt, int gap_checks) {
  const int L = 3 * l + 1;
  const int n = l + (skink ? 1 : 0);
  HilbertSpace sp = enumerate_space(L, n);
  std::vector<int> pin;
  if (skink) pin.push_back(1);
  for (int m = 1; m <= l; ++m) pin.push_back(3 * m);
  std::vector<double> hi_diag = pinning_diagonal(sp, pin);
  std::vector<double> psi0 = product_state(sp, pin);
  KinkBasis basis = extract_kink_band(l, lambda, skink);
  std::vector<double> target(basis.kink(1).begin(), basis.kink(1).end());
  SparseMatrix hq = build_hq(sp, stagger_11l(L, lambda));
  std::vector<double> d(sp.dim(), 0.0);
  if (skink) {
    auto n1 = number_diagonal(sp, 1), n2 = number_diagonal(sp, 2), n3 = number_diagonal(sp, 3);
    for (int i = 0; i < sp.dim(); ++i) d[i] = 3.0 * (-n1[i] + n2[i] - 0.5 * n3[i]);
  } else {
    auto n1 = number_diagonal(sp, 1), n2 = number_diagonal(sp, 2);
    for (int i = 0; i < sp.dim(); ++i) d[i] = 100.0 * (n1[i] + n2[i]);
  }
  SparseMatrix hf = add(hq, SparseMatrix::diagonal(d));
  io::Table t;
  t.comments = {"adiabatic preparation fidelity vs sweep duration (cosine ramp)",
                "l=" + std::to_string(l) + " lambda=" + fshort(lambda) +
                    (skink ? " skink" : " kink"),
                "fidelity = |<K_1|psi(T)>| against the localized band state"};
  t.columns = {"T_J", "fidelity", "min_gap"};
  t.data.resize(3);
  for (double T : t_grid) {
    SweepProtocol prot;
    prot.h_initial = SparseMatrix::diagonal(hi_diag);
    prot.h_final = hf;
    prot.duration = T;
    prot.dt = dt;
    PrepareResult res = adiabatic_prepare(prot, psi0, target, gap_checks);
    t.data[0].push_back(T);
    t.data[1].push_back(res.fidelity);
    t.data[2].push_back(gap_checks > 0 ? res.min_gap : -1.0);
  }
  out.write(t, "prepare", {{"dt", fstr(dt)}});
}

// ---------------------------------------------------------------- rydberg quench

void run_rydberg_quench(Output out, int l, bool skink, const std::string& variant, double t_max,
                        int npts, double omega_mhz, double delta_over_omega, double c6_ghz,
                        double r0, bool rydberg_hops) {
  if (variant != "full" && variant != "truncated" && variant != "hq")
    throw std::invalid_argument("variant must be full | truncated | hq");
  const int L = 3 * l + 1;
  const int n = l + (skink ? 1 : 0);
  DressingLayer layer = layer_from(omega_mhz, delta_over_omega, c6_ghz);
  const double j = dressed_potential(layer, 2.0 * r0);
  HilbertSpace con = enumerate_space(L, n);
  std::vector<double> init = skink ? skink_pinned_ground_state(L, n, 1.0)
                                   : projected_kink_ground_state(L, n, 1.0);
  const ObservableKind kind = skink ? ObservableKind::dnbar : ObservableKind::dn;
  KinkBasis basis = extract_kink_band(l, 1.0, skink);
  std::vector<double> site_sum_con = observable_site_sum(kind, con);
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < con.dim(); ++i) {
    m1 += site_sum_con[i] * basis.kink(1)[i] * basis.kink(1)[i];
    m2 += site_sum_con[i] * basis.kink(l + 1)[i] * basis.kink(l + 1)[i];
  }
  ObservableFit fit = fit_observable_coeffs(kind, m1, m2);

  std::vector<double> tj(npts);
  for (int i = 0; i < npts; ++i) tj[i] = t_max * i / (npts - 1);

  io::Table t;
  t.comments = {"quantum simulation of H_Q with Rydberg-dressed atoms",
                "L=" + std::to_string(L) + " n=" + std::to_string(n) + " variant=" + variant,
                "Omega=2pi x " + fshort(omega_mhz) + " MHz, Delta/Omega=" +
                    fshort(delta_over_omega) + ", C6=" + fshort(c6_ghz) +
                    " GHz um^6, r0=" + fshort(r0) + " um",
                "J = W(2 r0) = " + fshort(j) + " Hz"};

  if (variant == "hq") {
    Spectrum spec = diagonalize(build_hq(con, stagger_11l(L, 1.0)));
    std::vector<cplx> psi0(con.dim());
    for (int i = 0; i < con.dim(); ++i) psi0[i] = init[i];
    QuenchSeries series = propagate_eigen(spec, psi0, tj, {{"sum", site_sum_con}});
    t.columns = {"t_J", "t_seconds", "detector"};
    t.data.resize(3);
    for (int i = 0; i < npts; ++i) {
      t.data[0].push_back(tj[i]);
      t.data[1].push_back(tj[i] / j);
      t.data[2].push_back(
          observable_value(kind, fit.alpha, fit.beta, series.observables["sum"][i]));
    }
  } else {
    RydbergParams p;
    p.hopping = j;
    p.mu.assign(L, 0.0);
    p.mu[0] = p.mu[L - 1] = j;
    p.omega.assign(L, layer.omega);
    p.delta = layer.delta;
    p.c6 = layer.c6;
    p.r0 = r0;
    p.range_cut = variant == "truncated" ? 2 : -1;
    p.rydberg_hops = rydberg_hops;
    RydbergSpace ryd = enumerate_rydberg(L, n);
    SparseMatrix h = build_rydberg(ryd, p);
    Spectrum spec = diagonalize_dense(h);
    std::vector<cplx> psi0(ryd.dim(), cplx{0.0, 0.0});
    for (int i = 0; i < con.dim(); ++i)
      psi0[ryd.index_of(RydbergSpace::pack(con.states[i], 0))] = init[i];
    std::vector<double> sum_ryd = number_diagonal(ryd, L - 1);
    {
      auto nl = number_diagonal(ryd, L);
      for (int i = 0; i < ryd.dim(); ++i) sum_ryd[i] += nl[i];
      if (kind != ObservableKind::dn) {
        auto n2 = number_diagonal(ryd, L - 2);
        for (int i = 0; i < ryd.dim(); ++i) sum_ryd[i] += n2[i];
      }
    }
    std::vector<double> nr_total(ryd.dim(), 0.0);
    for (int s = 1; s <= L; ++s) {
      auto nr = rydberg_diagonal(ryd, s);
      for (int i = 0; i < ryd.dim(); ++i) nr_total[i] += nr[i];
    }
    std::vector<double> gg = nn_ground_pairs_diagonal(ryd);
    std::vector<double> times(npts);
    for (int i = 0; i < npts; ++i) times[i] = tj[i] / j;
    QuenchSeries series =
        propagate_eigen(spec, psi0, times, {{"sum", sum_ryd}, {"nr", nr_total}, {"gg", gg}});
    t.columns = {"t_J", "t_seconds", "detector", "nr_mean_over_l", "nr_per_atom", "nn_gg_over_l"};
    t.data.resize(6);
    for (int i = 0; i < npts; ++i) {
      t.data[0].push_back(tj[i]);
      t.data[1].push_back(times[i]);
      t.data[2].push_back(
          observable_value(kind, fit.alpha, fit.beta, series.observables["sum"][i]));
      t.data[3].push_back(series.observables["nr"][i] / l);
      t.data[4].push_back(series.observables["nr"][i] / n);
      t.data[5].push_back(series.observables["gg"][i] / l);
    }
  }
  out.write(t, "rydberg-quench",
            {{"J_Hz", fstr(j)}, {"alpha", fstr(fit.alpha)}, {"beta", fstr(fit.beta)}});
}

// ---------------------------------------------------------------- design potential

void run_design_potential(Output out, const std::string& scheme, double omega_mhz,
                          double delta_over_omega, double c6_ghz, double r0, double r_min,
                          double r_max, int npts, double fredholm_s, int fredholm_nrho,
                          double rho_min, double rho_max, int fit_n, double rcond) {
  io::Table t;
  if (scheme == "fredholm") {
    std::vector<double> rho(fredholm_nrho), fit(fit_n);
    for (int i = 0; i < fredholm_nrho; ++i)
      rho[i] = rho_min + (rho_max - rho_min) * i / (fredholm_nrho - 1);
    for (int i = 0; i < fit_n; ++i) fit[i] = i + 1.0;
    FredholmResult res = fredholm_design(fredholm_s, rho, fit, rcond);
    t.comments = {"multi-dressing design by truncated-SVD pseudoinverse",
                  "suppression s=" + fshort(fredholm_s) + " rank=" + std::to_string(res.rank),
                  "r in units of r0; target normalized to W_target(2 r0) = 1"};
    t.columns = {"r_over_r0", "w_tot", "w_target"};
    t.data.resize(3);
    for (int i = 0; i < npts; ++i) {
      const double r = r_min + (r_max - r_min) * i / (npts - 1);
      t.data[0].push_back(r);
      t.data[1].push_back(res.total(r));
      t.data[2].push_back(res.target(r));
    }
    out.write(t, "design-potential",
              {{"max_residual_rel", fstr(res.max_residual_rel)},
               {"far_tail_W2_over_W25", fstr(res.total(2.0) / res.total(25.0))}});
    io::Table amps;
    amps.comments = {"designed amplitudes"};
    amps.columns = {"rho_r0", "amplitude"};
    amps.data.resize(2);
    for (std::size_t i = 0; i < rho.size(); ++i) {
      amps.data[0].push_back(rho[i]);
      amps.data[1].push_back(res.amplitudes[i]);
    }
    out.write(amps, "design-potential", {}, "_amplitudes");
    return;
  }
  DressingLayer primary = layer_from(omega_mhz, delta_over_omega, c6_ghz);
  PotentialDesign design{{primary}};
  if (scheme == "double74")
    design.layers.push_back(match_double_dressing(primary, -500e6, -6005e9));
  else if (scheme == "double84")
    design.layers.push_back(match_double_dressing(primary, -500e6, -24200e9));
  else if (scheme != "single")
    throw std::invalid_argument("scheme must be single | double74 | double84 | fredholm");
  t.comments = {"dressed potential, scheme " + scheme,
                "Omega=2pi x " + fshort(omega_mhz) + " MHz, Delta/Omega=" +
                    fshort(delta_over_omega) + ", C6=" + fshort(c6_ghz) + " GHz um^6",
                "r in units of r0=" + fshort(r0) + " um; W in Hz (documented convention)"};
  t.columns = {"r_over_r0", "w_primary", "w_secondary", "w_tot"};
  t.data.resize(4);
  for (int i = 0; i < npts; ++i) {
    const double rr = r_min + (r_max - r_min) * i / (npts - 1);
    const double r = rr * r0;
    t.data[0].push_back(rr);
    t.data[1].push_back(dressed_potential(design.layers[0], r));
    t.data[2].push_back(design.layers.size() > 1 ? dressed_potential(design.layers[1], r) : 0.0);
    t.data[3].push_back(design.total(r));
  }
  const double j = design.total(2.0 * r0);
  out.write(t, "design-potential",
            {{"W2r0_Hz", fstr(j)},
             {"blockade_ratio", fstr(design.total(r0) / j)},
             {"tail_ratio", fstr(j / design.total(3.0 * r0))}});
}

// ---------------------------------------------------------------- budget

void run_budget(Output out, std::vector<double> tau0_list, double ratio_min, double ratio_max,
                int npts, double omega_mhz, double c6_ghz, double r0, double kappa,
                const std::string& e_scft) {
  io::Table t;
  t.comments = {"achievable system size vs Delta/Omega",
                "Omega=2pi x " + fshort(omega_mhz) + " MHz, C6=" + fshort(c6_ghz) +
                    " GHz um^6, r0=" + fshort(r0) + " um, kappa=" + fshort(kappa)};
  t.columns = {"delta_over_omega"};
  t.data.resize(1 + tau0_list.size());
  for (double tau : tau0_list) t.columns.push_back("Lmax_tau0_" + fshort(tau) + "s");
  for (int i = 0; i < npts; ++i) {
    const double ratio = ratio_min + (ratio_max - ratio_min) * i / (npts - 1);
    t.data[0].push_back(ratio);
    for (std::size_t k = 0; k < tau0_list.size(); ++k) {
      BudgetParams p;
      p.omega = angular(omega_mhz * 1e6);
      p.delta = ratio * p.omega;
      p.c6 = c6_ghz * 1e9;
      p.r0 = r0;
      p.tau0 = tau0_list[k];
      p.kappa = kappa;
      p.e_scft = e_scft == "2/3" ? 2.0 / 3.0 : 1.0 / 3.0;
      t.data[1 + k].push_back(coherence_budget(p, kappa > 0.0));
    }
  }
  out.write(t, "budget");
}

// ---------------------------------------------------------------- figures

void run_figures(const Output& base, const std::string& fig) {
  Output out = base;
  out.name = "fig" + fig;
  out.config["fig"] = fig;
  if (fig == "1b") {
    run_densities(out, 6, 1.0, 0.77);
  } else if (fig == "1c") {
    Output o = out;
    for (double lam : {0.0, 0.5, 1.0}) {
      o.name = "fig1c_lambda" + io::format_value(lam, 3);
      run_kink_profile(o, 4, lam, 1, false);
    }
  } else if (fig == "1d") {
    run_design_potential(out, "single", 10.0, 10.0, 645.0, 2.5, 0.2, 10.0, 400, 0, 0, 0, 0, 0, 0);
  } else if (fig == "2a") {
    io::Table t;
    t.comments = {"lowest levels of H_Q for L=13 in the n=4 (kink) and n=5 (skink) sectors"};
    t.columns = {"lambda"};
    for (int k = 1; k <= 9; ++k) t.columns.push_back("E" + std::to_string(k) + "_n4");
    for (int k = 1; k <= 9; ++k) t.columns.push_back("E" + std::to_string(k) + "_n5");
    t.data.resize(19);
    HilbertSpace s4 = enumerate_space(13, 4);
    HilbertSpace s5 = enumerate_space(13, 5);
    for (int i = 0; i <= 50; ++i) {
      const double lam = i / 50.0;
      t.data[0].push_back(lam);
      Spectrum e4 = diagonalize(build_hq(s4, stagger_11l(13, lam)));
      Spectrum e5 = diagonalize(build_hq(s5, stagger_11l(13, lam)));
      for (int k = 0; k < 9; ++k) t.data[1 + k].push_back(e4.energies[k]);
      for (int k = 0; k < 9; ++k) t.data[10 + k].push_back(e5.energies[k]);
    }
    out.write(t, "figures");
  } else if (fig == "2b") {
    run_dispersion(out, {0.1, 0.5, 1.0}, 200, 4);
  } else if (fig == "3a") {
    Output o = out;
    o.name = "fig3a_exact";
    run_quench(o, 4, 1.0, "exact-kink", 12.4, 0.02);
    o.name = "fig3a_prepared";
    run_quench(o, 4, 1.0, "prepared", 12.4, 0.02);
    io::Table t;
    t.comments = {"overlap evaluated with the continuum dispersion energies"};
    t.columns = {"t_J", "o2_continuum"};
    t.data.resize(2);
    std::vector<double> ts;
    for (double tt = 0.0; tt <= 12.4; tt += 0.02) ts.push_back(tt);
    std::vector<cplx> cont = overlap_continuum(4, 1.0, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      t.data[0].push_back(ts[i]);
      t.data[1].push_back(std::norm(cont[i]));
    }
    o.name = "fig3a_continuum";
    o.write(t, "figures");
  } else if (fig == "3b") {
    run_saddle(out, 101, 1.0, 2, 0.2, 5.0, 2400);
  } else if (fig == "3c") {
    Output o = out;
    for (bool skink : {false, true}) {
      const std::string tag = skink ? "skink" : "kink";
      for (const char* variant : {"full", "truncated", "hq"}) {
        o.name = "fig3c_" + tag + "_" + std::string(variant);
        run_rydberg_quench(o, 3, skink, variant, 10.0, 201, 10.0, 10.0, 645.0, 2.5, false);
      }
    }
  } else if (fig == "s1") {
    Output o = out;
    for (double lam : {0.0, 1.0})
      for (int j : {1, 2, 4})
        for (bool skink : {false, true}) {
          o.name = "figs1_" + std::string(skink ? "skink" : "kink") + std::to_string(j) +
                   "_lambda" + io::format_value(lam, 3);
          run_kink_profile(o, 3, lam, j, skink);
        }
  } else if (fig == "s2") {
    io::Table t;
    t.comments = {"detector coefficients vs l at criticality"};
    t.columns = {"l", "alpha", "beta", "alpha3", "beta3", "alphabar", "betabar"};
    t.data.resize(7);
    for (int l = 2; l <= 6; ++l) {
      const int L = 3 * l + 1;
      KinkBasis kb = extract_kink_band(l, 1.0);
      KinkBasis sb = extract_kink_band(l, 1.0, true);
      HilbertSpace spk = enumerate_space(L, l);
      HilbertSpace sps = enumerate_space(L, l + 1);
      auto fit_for = [&](ObservableKind kind, const KinkBasis& b, const HilbertSpace& sp2) {
        std::vector<double> m = observable_site_sum(kind, sp2);
        double v1 = 0.0, v2 = 0.0;
        for (int i = 0; i < sp2.dim(); ++i) {
          v1 += m[i] * b.kink(1)[i] * b.kink(1)[i];
          v2 += m[i] * b.kink(l + 1)[i] * b.kink(l + 1)[i];
        }
        return fit_observable_coeffs(kind, v1, v2);
      };
      ObservableFit f1 = fit_for(ObservableKind::dn, kb, spk);
      ObservableFit f3 = fit_for(ObservableKind::dn3, kb, spk);
      ObservableFit fb = fit_for(ObservableKind::dnbar, sb, sps);
      t.data[0].push_back(l);
      t.data[1].push_back(f1.alpha);
      t.data[2].push_back(f1.beta);
      t.data[3].push_back(f3.alpha);
      t.data[4].push_back(f3.beta);
      t.data[5].push_back(fb.alpha);
      t.data[6].push_back(fb.beta);
    }
    out.write(t, "figures");
    Output o = out;
    o.name = "figs2_series";
    run_quench(o, 3, 1.0, "exact-kink", 9.3, 0.02);
  } else if (fig == "s3") {
    Output o = out;
    for (int l : {2, 4}) {
      o.name = "figs3_kink_l" + std::to_string(l);
      run_prepare(o, l, 1.0, false, {12.5, 25.0, 50.0, 100.0, 200.0}, 0.005, 8);
    }
  } else if (fig == "s4") {
    DressingLayer primary = layer_from(10.0, 10.0, 645.0);
    DressingLayer sec = match_double_dressing(primary, -500e6, -6005e9);
    io::Table t;
    t.comments = {"ground-state fidelity against the interaction tails, L=3l, pattern 1 lambda 1",
                  "single vs double dressing"};
    t.columns = {"lambda"};
    for (int l = 2; l <= 6; ++l) t.columns.push_back("F_single_l" + std::to_string(l));
    for (int l = 2; l <= 6; ++l) t.columns.push_back("F_double_l" + std::to_string(l));
    t.data.resize(11);
    for (int i = 2; i <= 10; ++i) {
      const double lam = i / 10.0;
      t.data[0].push_back(lam);
      for (int scheme = 0; scheme < 2; ++scheme) {
        for (int l = 2; l <= 6; ++l) {
          const int L = 3 * l;
          HilbertSpace sp2 = enumerate_space(L, l);
          const Staggering st = stagger_1l1(L, lam);
          auto pot = [&](double r) {
            double w = dressed_potential(primary, r);
            if (scheme == 1) w += dressed_potential(sec, r);
            return w;
          };
          DressedCouplings plain = dressed_chain_couplings(lam, L, st, pot, 2.5, false);
          DressedCouplings tails = dressed_chain_couplings(lam, L, st, pot, 2.5, true);
          Spectrum a = diagonalize(build_hq_dressed(sp2, plain));
          Spectrum b = diagonalize(build_hq_dressed(sp2, tails));
          double ov = 0.0;
          for (int q = 0; q < sp2.dim(); ++q) ov += a.vec(0)[q] * b.vec(0)[q];
          t.data[1 + scheme * 5 + (l - 2)].push_back(std::abs(ov));
        }
      }
    }
    out.write(t, "figures");
  } else if (fig == "s5") {
    Output o = out;
    o.name = "figs5_74D";
    run_design_potential(o, "double74", 10.0, 10.0, 645.0, 2.5, 0.2, 30.0, 600, 0, 0, 0, 0, 0, 0);
    o.name = "figs5_84D";
    run_design_potential(o, "double84", 10.0, 10.0, 645.0, 2.5, 0.2, 30.0, 600, 0, 0, 0, 0, 0, 0);
  } else if (fig == "s6") {
    Output o = out;
    o.name = "figs6_s1e3";
    run_design_potential(o, "fredholm", 0, 0, 0, 0, 0.5, 30.0, 600, 1e3, 11, 0.01, 1.5, 12, 1e-6);
    o.name = "figs6_s1e5";
    run_design_potential(o, "fredholm", 0, 0, 0, 0, 0.5, 30.0, 600, 1e5, 12, 0.05, 1.5, 20, 1e-8);
  } else if (fig == "s7") {
    run_budget(out, {8.6e-3, 2.8e-3, 0.42e-3}, 2.0, 30.0, 141, 10.0, 645.0, 2.5, 0.0, "1/3");
  } else {
    throw std::invalid_argument("unknown figure id: " + fig);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) +
               " - supersymmetric M1 lattice model and Rydberg-dressing simulator"};
  app.set_config("--config", "", "declarative run configuration file; flags win");

  std::string outdir = ".";
  if (const char* env = std::getenv("M1SIM_OUTDIR")) outdir = env;
  app.add_option("--outdir", outdir, "output directory (env M1SIM_OUTDIR)");

  auto make_output = [&](const CLI::App* sub, const std::string& default_name) {
    Output o;
    o.dir = outdir;
    o.name = default_name;
    for (const CLI::Option* opt : sub->get_options())
      if (opt->count() && !opt->get_name().empty() && opt->get_name() != "--config")
        o.config[opt->get_name()] = opt->as<std::string>();
    return o;
  };

  auto* sp = app.add_subcommand("spectrum", "sector spectrum of H_Q");
  int sp_L = 13, sp_n = 4, sp_k = -1;
  double sp_lam = 1.0;
  std::string sp_pattern = "11l", sp_boundary = "open", sp_out = "spectrum";
  sp->add_option("--L", sp_L, "chain length");
  sp->add_option("--n", sp_n, "particle number");
  sp->add_option("--lambda", sp_lam, "staggering parameter");
  sp->add_option("--pattern", sp_pattern, "11l | 1l1 | l11");
  sp->add_option("--boundary", sp_boundary, "open | periodic");
  sp->add_option("--k", sp_k, "number of lowest eigenpairs (-1: all)");
  sp->add_option("--out", sp_out, "output stem");

  auto* de = app.add_subcommand("densities", "ground-state densities vs the critical curve");
  int de_l = 6;
  double de_lam = 1.0, de_a = 0.77;
  std::string de_out = "densities";
  de->add_option("--l", de_l);
  de->add_option("--lambda", de_lam);
  de->add_option("--cft-A", de_a, "scaling-curve amplitude");
  de->add_option("--out", de_out);

  auto* kp = app.add_subcommand("kink-profile",
                                "particle/energy densities of a localized (s)kink");
  int kp_l = 4, kp_j = 1;
  double kp_lam = 1.0;
  bool kp_skink = false;
  std::string kp_out = "kink-profile";
  kp->add_option("--l", kp_l);
  kp->add_option("--lambda", kp_lam);
  kp->add_option("--j", kp_j, "kink position label 1..l+1");
  kp->add_flag("--skink", kp_skink, "use the skink sector");
  kp->add_option("--out", kp_out);

  auto* qu = app.add_subcommand("quench", "boundary-kink quench under H_Q");
  int qu_l = 4;
  double qu_lam = 1.0, qu_tmax = 30.0, qu_dt = 0.05;
  std::string qu_init = "exact-kink", qu_out = "quench";
  qu->add_option("--l", qu_l);
  qu->add_option("--lambda", qu_lam);
  qu->add_option("--init", qu_init, "exact-kink | prepared | skink | prepared-skink");
  qu->add_option("--t-max", qu_tmax, "horizon in 1/J units");
  qu->add_option("--dt", qu_dt, "output grid step");
  qu->add_option("--out", qu_out);

  auto* sa = app.add_subcommand("saddle", "saddle-point vs continuum overlap");
  int sa_l = 101, sa_smax = 2, sa_n = 2400;
  double sa_lam = 1.0, sa_xmin = 0.2, sa_xmax = 5.0;
  std::string sa_out = "saddle";
  sa->add_option("--l", sa_l);
  sa->add_option("--lambda", sa_lam);
  sa->add_option("--smax", sa_smax, "number of saddle indices");
  sa->add_option("--x-min", sa_xmin);
  sa->add_option("--x-max", sa_xmax);
  sa->add_option("--n", sa_n, "grid points");
  sa->add_option("--out", sa_out);

  auto* di = app.add_subcommand("dispersion", "continuum dispersion and group velocity");
  std::vector<double> di_lams{0.1, 0.5, 1.0};
  int di_n = 200, di_exact = 0;
  std::string di_out = "dispersion";
  di->add_option("--lambda-list", di_lams, "staggering values");
  di->add_option("--n", di_n);
  di->add_option("--exact-l", di_exact, "also write the exact band for this l (0: skip)");
  di->add_option("--out", di_out);

  auto* pr = app.add_subcommand("prepare", "adiabatic (s)kink preparation fidelity");
  int pr_l = 4, pr_gap = 0;
  double pr_lam = 1.0, pr_dt = 0.005;
  bool pr_skink = false;
  std::vector<double> pr_T{25.0, 50.0, 100.0, 200.0};
  std::string pr_out = "prepare";
  pr->add_option("--l", pr_l);
  pr->add_option("--lambda", pr_lam);
  pr->add_flag("--skink", pr_skink);
  pr->add_option("--T-grid", pr_T, "sweep durations in 1/J units");
  pr->add_option("--dt", pr_dt);
  pr->add_option("--gap-checks", pr_gap, "instantaneous-gap checkpoints (0: off)");
  pr->add_option("--out", pr_out);

  auto* ry = app.add_subcommand("rydberg-quench", "quench under the full Rydberg Hamiltonian");
  int ry_l = 3, ry_n = 201;
  double ry_tmax = 10.0, ry_ratio = 10.0, ry_r0 = 2.5;
  bool ry_skink = false, ry_rhops = false;
  std::string ry_variant = "full", ry_out = "rydberg-quench";
  ry->add_option("--l", ry_l);
  ry->add_flag("--skink", ry_skink);
  ry->add_option("--variant", ry_variant, "full | truncated | hq");
  ry->add_option("--t-max", ry_tmax, "horizon in tJ");
  ry->add_option("--n-points", ry_n);
  std::string ry_omega_s = "10", ry_c6_s = "645";
  ry->add_option("--omega", ry_omega_s, "Rabi frequency as 2pi x value; MHz default, Hz/kHz/MHz/GHz suffixes");
  ry->add_option("--delta-ratio", ry_ratio, "Delta/Omega");
  ry->add_option("--c6", ry_c6_s, "C6 as tabulated, GHz um^6 default, frequency suffixes allowed");
  ry->add_option("--r0", ry_r0, "lattice spacing in um");
  ry->add_flag("--rydberg-hops", ry_rhops, "let Rydberg-state atoms hop too");
  ry->add_option("--out", ry_out);

  auto* dp = app.add_subcommand("design-potential",
                                "dressed potentials and multi-dressing design");
  std::string dp_scheme = "single", dp_out = "design-potential";
  double dp_ratio = 10.0, dp_r0 = 2.5;
  double dp_rmin = 0.2, dp_rmax = 10.0, dp_s = 1e3, dp_rhomin = 0.01, dp_rhomax = 1.5,
         dp_rcond = 1e-12;
  int dp_n = 400, dp_nrho = 11, dp_fitn = 12;
  dp->add_option("--scheme", dp_scheme, "single | double74 | double84 | fredholm");
  std::string dp_omega_s = "10", dp_c6_s = "645";
  dp->add_option("--omega", dp_omega_s, "Rabi frequency as 2pi x value; MHz default");
  dp->add_option("--delta-ratio", dp_ratio);
  dp->add_option("--c6", dp_c6_s, "C6 as tabulated, GHz um^6 default");
  dp->add_option("--r0", dp_r0);
  dp->add_option("--r-min", dp_rmin, "plot range in r/r0");
  dp->add_option("--r-max", dp_rmax);
  dp->add_option("--n", dp_n);
  dp->add_option("--suppression", dp_s, "target suppression factor (fredholm)");
  dp->add_option("--n-rho", dp_nrho, "number of inverse radii (fredholm)");
  dp->add_option("--rho-min", dp_rhomin);
  dp->add_option("--rho-max", dp_rhomax);
  dp->add_option("--fit-n", dp_fitn, "fit points r_i = 1..N in units of r0");
  dp->add_option("--rcond", dp_rcond, "relative singular-value cutoff");
  dp->add_option("--out", dp_out);

  auto* bu = app.add_subcommand("budget", "coherence-limited system size");
  std::vector<double> bu_tau{8.6e-3, 2.8e-3, 0.42e-3};
  double bu_rmin = 2.0, bu_rmax = 30.0, bu_r0 = 2.5, bu_kappa = 0.0;
  int bu_n = 141;
  std::string bu_escft = "1/3", bu_out = "budget";
  bu->add_option("--tau0-list", bu_tau, "Rydberg lifetimes in seconds");
  bu->add_option("--ratio-min", bu_rmin, "Delta/Omega range");
  bu->add_option("--ratio-max", bu_rmax);
  bu->add_option("--n", bu_n);
  std::string bu_omega_s = "10", bu_c6_s = "645";
  bu->add_option("--omega", bu_omega_s, "Rabi frequency as 2pi x value; MHz default");
  bu->add_option("--c6", bu_c6_s, "C6 as tabulated, GHz um^6 default");
  bu->add_option("--r0", bu_r0);
  bu->add_option("--kappa", bu_kappa, "preparation time in units of the inverse gap");
  bu->add_option("--e-scft", bu_escft, "1/3 | 2/3");
  bu->add_option("--out", bu_out);

  auto* fg = app.add_subcommand("figures", "figure parameter presets");
  std::string fg_id;
  fg->add_option("--fig", fg_id, "1b 1c 1d 2a 2b 3a 3b 3c s1..s7")->required();

  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;  // config error
  }

  try {
    if (sp->parsed())
      run_spectrum(make_output(sp, sp_out), sp_L, sp_n, sp_lam, sp_pattern, sp_boundary, sp_k);
    if (de->parsed()) run_densities(make_output(de, de_out), de_l, de_lam, de_a);
    if (kp->parsed()) run_kink_profile(make_output(kp, kp_out), kp_l, kp_lam, kp_j, kp_skink);
    if (qu->parsed()) run_quench(make_output(qu, qu_out), qu_l, qu_lam, qu_init, qu_tmax, qu_dt);
    if (sa->parsed())
      run_saddle(make_output(sa, sa_out), sa_l, sa_lam, sa_smax, sa_xmin, sa_xmax, sa_n);
    if (di->parsed()) run_dispersion(make_output(di, di_out), di_lams, di_n, di_exact);
    if (pr->parsed())
      run_prepare(make_output(pr, pr_out), pr_l, pr_lam, pr_skink, pr_T, pr_dt, pr_gap);
    if (ry->parsed())
      run_rydberg_quench(make_output(ry, ry_out), ry_l, ry_skink, ry_variant, ry_tmax, ry_n,
                         parse_in_unit(ry_omega_s, 1e6), ry_ratio, parse_in_unit(ry_c6_s, 1e9),
                         ry_r0, ry_rhops);
    if (dp->parsed())
      run_design_potential(make_output(dp, dp_out), dp_scheme, parse_in_unit(dp_omega_s, 1e6),
                           dp_ratio, parse_in_unit(dp_c6_s, 1e9), dp_r0, dp_rmin, dp_rmax, dp_n,
                           dp_s, dp_nrho, dp_rhomin, dp_rhomax, dp_fitn, dp_rcond);
    if (bu->parsed())
      run_budget(make_output(bu, bu_out), bu_tau, bu_rmin, bu_rmax, bu_n,
                 parse_in_unit(bu_omega_s, 1e6), parse_in_unit(bu_c6_s, 1e9), bu_r0, bu_kappa,
                 bu_escft);
    if (fg->parsed()) run_figures(make_output(fg, "figures"), fg_id);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  }
  return 0;
}

#include "coldsplit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "coldsplit/errors.hpp"

namespace coldsplit {

using cplx = std::complex<double>;

void Grid::validate(const MediumParams& medium, const ControlSchedule& fw,
                    const ControlSchedule& bw) const {
    if (nz < 64)
        throw NumericError("grid: nz must be >= 64");
    if (nt < 2)
        throw NumericError("grid: nt must be >= 2");
    if (!(t_end > 0.0))
        throw NumericError("grid: t_end must be > 0");
    const double rate = std::max({0.5 * medium.gamma,
                                  0.5 * fw.max_amplitude(),
                                  0.5 * bw.max_amplitude(),
                                  std::abs(fw.detuning),
                                  std::abs(bw.detuning)});
    if (dt() * rate >= 0.1)
        throw NumericError("grid: stability contract violated, dt*max(gamma/2,|Omega|/2,|Delta|) = " +
                           std::to_string(dt() * rate) + " >= 0.1");
}

std::vector<double> SimResult::fw_out() const {
    std::vector<double> v(fw_field.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::norm(fw_field[i]);
    return v;
}

std::vector<double> SimResult::bw_out() const {
    std::vector<double> v(bw_field.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::norm(bw_field[i]);
    return v;
}

std::vector<double> SimResult::fw_phase() const {
    std::vector<double> v(fw_field.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::arg(fw_field[i]);
    return v;
}

std::vector<double> SimResult::bw_phase() const {
    std::vector<double> v(bw_field.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::arg(bw_field[i]);
    return v;
}

namespace {

struct Atoms {
    std::vector<cplx> pf, pb, s;
    explicit Atoms(int nz) : pf(nz), pb(nz), s(nz) {}
};

// Merge the on-intervals of both controls into one time-ordered list.
std::vector<std::pair<double, double>> merged_on_intervals(const ControlSchedule& fw,
                                                           const ControlSchedule& bw) {
    auto a = fw.on_intervals();
    auto b = bw.on_intervals();
    std::vector<std::pair<double, double>> all;
    all.reserve(a.size() + b.size());
    all.insert(all.end(), a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : all) {
        if (!merged.empty() && iv.first <= merged.back().second)
            merged.back().second = std::max(merged.back().second, iv.second);
        else
            merged.push_back(iv);
    }
    return merged;
}

class Integrator {
public:
    Integrator(const MediumParams& medium, const ControlSchedule& fw,
               const ControlSchedule& bw, const ProbePulse& probe,
               const Grid& grid, const SolverOptions& opt)
        : medium_(medium), fw_(fw), bw_(bw), probe_(probe), grid_(grid), opt_(opt),
          nz_(grid.nz), dz_(grid.dz(medium.length)), dt_(grid.dt()),
          kappa_(std::sqrt(medium.coupling_product())),
          half_gamma_(0.5 * medium.gamma),
          y_(nz_), k1_(nz_), k2_(nz_), k3_(nz_), k4_(nz_), tmp_(nz_),
          ef_(nz_), eb_(nz_), mis_(nz_) {
        for (int j = 0; j < nz_; ++j)
            mis_[j] = std::polar(1.0, opt.bw_k_mismatch * j * dz_);
        if (!opt.initial_spin_wave.empty()) {
            if (static_cast<int>(opt.initial_spin_wave.size()) != nz_)
                throw NumericError("solver: initial spin wave size does not match nz");
            y_.s = opt.initial_spin_wave;
        }
    }

    SimResult integrate();

private:
    cplx probe_value(double t) const { return probe_.evaluate(t); }

    // Quasi-steady spatial integration of the field equations given the
    // polarizations: forward sweep from z=0, backward sweep from z=L.
    void solve_fields(double t, const Atoms& a, std::vector<cplx>& ef,
                      std::vector<cplx>& eb) const {
        const cplx boundary = probe_value(t);
        const cplx ikh = cplx(0.0, kappa_ * 0.5 * dz_);
        ef[0] = opt_.probe_into_bw ? cplx(0.0) : boundary;
        for (int j = 1; j < nz_; ++j)
            ef[j] = ef[j - 1] + ikh * (a.pf[j - 1] + a.pf[j]);
        eb[nz_ - 1] = opt_.probe_into_bw ? boundary : cplx(0.0);
        for (int j = nz_ - 2; j >= 0; --j)
            eb[j] = eb[j + 1] + ikh * (a.pb[j + 1] + a.pb[j]);
    }

    void derivative(double t, const Atoms& a, Atoms& d) {
        solve_fields(t, a, ef_, eb_);
        const cplx of = fw_.evaluate(t);
        const cplx ob = bw_.evaluate(t);
        const cplx cf(-half_gamma_, -fw_.detuning);
        const cplx cb(-half_gamma_, -bw_.detuning);
        const cplx ik(0.0, kappa_);
        const cplx i_of = cplx(0.0, 0.5) * of;
        const cplx i_ob = cplx(0.0, 0.5) * ob;
        const cplx i_ofc = cplx(0.0, 0.5) * std::conj(of);
        const cplx i_obc = cplx(0.0, 0.5) * std::conj(ob);
        const double ggs = medium_.gamma_gs;
        for (int j = 0; j < nz_; ++j) {
            const cplx m = mis_[j];
            d.pf[j] = cf * a.pf[j] + ik * ef_[j] + i_of * a.s[j];
            d.pb[j] = cb * a.pb[j] + ik * eb_[j] + i_ob * (m * a.s[j]);
            d.s[j] = -ggs * a.s[j] + i_ofc * a.pf[j] + i_obc * (std::conj(m) * a.pb[j]);
        }
    }

    static void axpy(Atoms& out, const Atoms& y, const Atoms& k, double a, int nz) {
        for (int j = 0; j < nz; ++j) {
            out.pf[j] = y.pf[j] + a * k.pf[j];
            out.pb[j] = y.pb[j] + a * k.pb[j];
            out.s[j] = y.s[j] + a * k.s[j];
        }
    }

    void rk4_step(double t) {
        derivative(t, y_, k1_);
        axpy(tmp_, y_, k1_, 0.5 * dt_, nz_);
        derivative(t + 0.5 * dt_, tmp_, k2_);
        axpy(tmp_, y_, k2_, 0.5 * dt_, nz_);
        derivative(t + 0.5 * dt_, tmp_, k3_);
        axpy(tmp_, y_, k3_, dt_, nz_);
        derivative(t + dt_, tmp_, k4_);
        const double w = dt_ / 6.0;
        for (int j = 0; j < nz_; ++j) {
            y_.pf[j] += w * (k1_.pf[j] + 2.0 * k2_.pf[j] + 2.0 * k3_.pf[j] + k4_.pf[j]);
            y_.pb[j] += w * (k1_.pb[j] + 2.0 * k2_.pb[j] + 2.0 * k3_.pb[j] + k4_.pb[j]);
            y_.s[j] += w * (k1_.s[j] + 2.0 * k2_.s[j] + 2.0 * k3_.s[j] + k4_.s[j]);
        }
    }

    // Trapezoidal z integral of the atomic energy line density.
    double atomic_energy() const {
        double sum = 0.0;
        for (int j = 0; j < nz_; ++j) {
            const double d = std::norm(y_.pf[j]) + std::norm(y_.pb[j]) + std::norm(y_.s[j]);
            sum += (j == 0 || j == nz_ - 1) ? 0.5 * d : d;
        }
        return sum * dz_;
    }

    double dissipation_density() const {
        double sum = 0.0;
        for (int j = 0; j < nz_; ++j) {
            const double d = medium_.gamma * (std::norm(y_.pf[j]) + std::norm(y_.pb[j])) +
                             2.0 * medium_.gamma_gs * std::norm(y_.s[j]);
            sum += (j == 0 || j == nz_ - 1) ? 0.5 * d : d;
        }
        return sum * dz_;
    }

    const MediumParams& medium_;
    const ControlSchedule& fw_;
    const ControlSchedule& bw_;
    const ProbePulse& probe_;
    const Grid& grid_;
    const SolverOptions& opt_;
    int nz_;
    double dz_, dt_, kappa_, half_gamma_;
    Atoms y_, k1_, k2_, k3_, k4_, tmp_;
    std::vector<cplx> ef_, eb_, mis_;
};

SimResult Integrator::integrate() {
    SimResult res;
    const int nt = grid_.nt;
    res.time.resize(nt);
    res.z.resize(nz_);
    for (int j = 0; j < nz_; ++j) res.z[j] = j * dz_;
    res.fw_field.resize(nt);
    res.bw_field.resize(nt);
    res.control_fw.resize(nt);
    res.control_bw.resize(nt);

    const auto merged = merged_on_intervals(fw_, bw_);
    if (merged.empty()) {
        res.storage_interval = {0.0, grid_.t_end};
    } else {
        for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
            if (merged[i].second < merged[i + 1].first) {
                res.storage_interval = {merged[i].second, merged[i + 1].first};
                res.retrieval_start = merged[i + 1].first;
                break;
            }
        }
        if (!res.storage_interval && merged.back().second < grid_.t_end)
            res.storage_interval = {merged.back().second, grid_.t_end};
    }

    const bool want_field_map = opt_.record_field_map;
    const bool want_spin_map = opt_.record_spin_map;
    const int stride = std::max(1, opt_.map_time_stride);
    if (want_field_map) res.field_map.emplace(SpacetimeMap{{}, res.z, {}});
    if (want_spin_map) res.spin_map.emplace(SpacetimeMap{{}, res.z, {}});

    auto record = [&](int n, double t) {
        solve_fields(t, y_, ef_, eb_);
        res.time[n] = t;
        res.fw_field[n] = ef_[nz_ - 1];
        res.bw_field[n] = eb_[0];
        res.control_fw[n] = std::abs(fw_.evaluate(t));
        res.control_bw[n] = std::abs(bw_.evaluate(t));
        if ((want_field_map || want_spin_map) && (n % stride == 0 || n == nt - 1)) {
            if (want_field_map) {
                res.field_map->t.push_back(t);
                for (int j = 0; j < nz_; ++j)
                    res.field_map->v.push_back(std::norm(ef_[j]) + std::norm(eb_[j]));
            }
            if (want_spin_map) {
                res.spin_map->t.push_back(t);
                for (int j = 0; j < nz_; ++j)
                    res.spin_map->v.push_back(std::norm(y_.s[j]));
            }
        }
    };

    // Ledger accumulation, trapezoidal in time. Boundary fluxes are read off
    // the exit faces; panels are split between leaked and retrieved at the
    // retrieval turn-on time.
    const double t_retr = res.retrieval_start.value_or(std::numeric_limits<double>::infinity());

    record(0, 0.0);
    double prev_in = std::norm(probe_value(0.0));
    double prev_fw = std::norm(res.fw_field[0]);
    double prev_bw = std::norm(res.bw_field[0]);
    double prev_diss = dissipation_density();

    for (int n = 0; n < nt - 1; ++n) {
        const double t = n * dt_;
        rk4_step(t);
        const double t1 = t + dt_;
        record(n + 1, t1);

        const double in1 = std::norm(probe_value(t1));
        const double fw1 = std::norm(res.fw_field[n + 1]);
        const double bw1 = std::norm(res.bw_field[n + 1]);
        const double diss1 = dissipation_density();
        res.ledger.input += 0.5 * (prev_in + in1) * dt_;
        res.ledger.dissipated += 0.5 * (prev_diss + diss1) * dt_;
        const double out_fw = 0.5 * (prev_fw + fw1) * dt_;
        const double out_bw = 0.5 * (prev_bw + bw1) * dt_;
        if (t + 0.5 * dt_ < t_retr) {
            res.ledger.leaked += out_fw + out_bw;
        } else {
            res.ledger.retrieved_fw += out_fw;
            res.ledger.retrieved_bw += out_bw;
        }
        prev_in = in1;
        prev_fw = fw1;
        prev_bw = bw1;
        prev_diss = diss1;

        if (!std::isfinite(diss1) || !std::isfinite(fw1) || !std::isfinite(bw1))
            throw NumericError("solver: non-finite state at step " + std::to_string(n + 1) +
                               " (t = " + std::to_string(t1) + " s)");
    }

    // Excitation still inside the medium never reaches a detector; count it
    // with the losses so the ledger closes.
    res.ledger.dissipated += atomic_energy();
    res.final_spin_wave = y_.s;
    return res;
}

} // namespace

SimResult run(const MediumParams& medium, const ControlSchedule& fw,
              const ControlSchedule& bw, const ProbePulse& probe,
              const Grid& grid, const SolverOptions& options) {
    medium.validate();
    fw.validate();
    bw.validate();
    probe.validate();
    grid.validate(medium, fw, bw);
    Integrator integ(medium, fw, bw, probe, grid, options);
    return integ.integrate();
}

double storage_efficiency(const SimResult& result) {
    if (!result.storage_interval)
        throw std::invalid_argument("storage_efficiency: result has no storage interval");
    if (!(result.ledger.input > 0.0))
        throw std::invalid_argument("storage_efficiency: zero input energy");
    return (result.ledger.retrieved_fw + result.ledger.retrieved_bw) / result.ledger.input;
}

} // namespace coldsplit

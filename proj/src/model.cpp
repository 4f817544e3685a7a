#include "nbiot/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace nbiot {

namespace {

void require_mcs_range(double m) {
  if (!(m >= kMcsMin && m <= kMcsMax)) {
    throw std::domain_error("MCS " + std::to_string(m) + " outside [0, 12]");
  }
}

bool is_integral(double x) { return std::floor(x) == x; }

}  // namespace

bool is_valid_mcs(int m) { return m >= kMcsMin && m <= kMcsMax; }

bool is_valid_repetitions(int r) {
  return std::find(kRepetitions.begin(), kRepetitions.end(), r) != kRepetitions.end();
}

bool is_valid_time_factor(int t) {
  return std::find(kTimeFactors.begin(), kTimeFactors.end(), t) != kTimeFactors.end();
}

bool is_valid(const LinkConfig &cfg) {
  return is_valid_mcs(cfg.mcs) && is_valid_time_factor(cfg.time_factor) &&
         is_valid_repetitions(cfg.repetitions);
}

void validate(const LinkConfig &cfg) {
  if (!is_valid_mcs(cfg.mcs)) {
    throw std::domain_error("invalid MCS " + std::to_string(cfg.mcs));
  }
  if (!is_valid_time_factor(cfg.time_factor)) {
    throw std::domain_error("invalid time factor " + std::to_string(cfg.time_factor));
  }
  if (!is_valid_repetitions(cfg.repetitions)) {
    throw std::domain_error("invalid repetition count " + std::to_string(cfg.repetitions));
  }
}

std::size_t time_factor_index(int t) {
  const auto it = std::find(kTimeFactors.begin(), kTimeFactors.end(), t);
  if (it == kTimeFactors.end()) {
    throw std::domain_error("time factor " + std::to_string(t) + " not in {1,2,4,8,32}");
  }
  return static_cast<std::size_t>(it - kTimeFactors.begin());
}

int tone_count(int t) { return kToneCounts[time_factor_index(t)]; }

double subcarriers_used(int t) {
  const auto i = time_factor_index(t);
  return kToneCounts[i] * kSubcarrierSpacingKhz[i] / 15.0;
}

double ToneMapping::fit_mse() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < kTimeFactors.size(); ++i) {
    const double e = fit(kTimeFactors[i]) - kFrequencyFactors[i];
    sum += e * e;
  }
  return sum / static_cast<double>(kTimeFactors.size());
}

int freq_factor(int t) { return kFrequencyFactors[time_factor_index(t)]; }

double freq_factor_relaxed(double t, const ToneMapping &mapping) {
  if (!(t >= 0.0 && t <= kTimeFactors.back())) {
    throw std::domain_error("relaxed time factor " + std::to_string(t) + " outside [0, 32]");
  }
  return mapping.fit(t);
}

double tbs_of_mcs(double m, const TbsModel &model) {
  require_mcs_range(m);
  if (model.table && is_integral(m)) {
    return (*model.table)[static_cast<std::size_t>(m)];
  }
  return (model.a * m + model.b) * m + model.c;
}

double tbs_fit_mse(const TbsModel &model) {
  if (!model.table) {
    return 0.0;
  }
  TbsModel quadratic = model;
  quadratic.table.reset();
  double sum = 0.0;
  for (int m = kMcsMin; m <= kMcsMax; ++m) {
    const double e = tbs_of_mcs(m, quadratic) - (*model.table)[static_cast<std::size_t>(m)];
    sum += e * e;
  }
  return sum / (kMcsMax - kMcsMin + 1);
}

double snr_threshold(double m, const SnrThresholdModel &model) {
  require_mcs_range(m);
  return ((model.q1 * m + model.q2) * m + model.q3) * m + model.q4;
}

void validate(const DelayModelParams &params) {
  if (!(params.k0() > 0.0)) {
    throw std::domain_error("k0 (t_PUSCH) must be positive");
  }
  if (!(params.k2() > 0.0)) {
    throw std::domain_error("k2 (data length) must be positive");
  }
  if (!(params.k1() >= 0.0)) {
    throw std::domain_error("k1 must be non-negative");
  }
  if (params.resource_units < 1) {
    throw std::domain_error("resource units must be at least 1");
  }
}

int transport_blocks(int m, const DelayModelParams &params, const TbsModel &tbs) {
  return static_cast<int>(std::ceil(params.k2() / tbs_of_mcs(m, tbs)));
}

double transmission_delay(const LinkConfig &cfg, const DelayModelParams &params,
                          const TbsModel &tbs, DelayForm form) {
  validate(cfg);
  const double tl = params.k1() + params.k0() * cfg.repetitions * cfg.time_factor;
  if (form == DelayForm::relaxed) {
    return tl * params.k2() / tbs_of_mcs(cfg.mcs, tbs);
  }
  return tl * transport_blocks(cfg.mcs, params, tbs);
}

double transmission_delay_relaxed(double m, double t, double r, const DelayModelParams &params,
                                  const TbsModel &tbs) {
  return (params.k1() + params.k0() * r * t) * params.k2() / tbs_of_mcs(m, tbs);
}

RadioContext::RadioContext(double tx_power_w, double noise_psd_w_per_hz, double pathloss_linear)
    : tx_power_w_(tx_power_w), noise_psd_(noise_psd_w_per_hz), pathloss_(pathloss_linear) {
  if (!(tx_power_w > 0.0) || !(noise_psd_w_per_hz > 0.0) || !(pathloss_linear > 0.0)) {
    throw std::domain_error("radio context fields must be strictly positive");
  }
  k3_ = tx_power_w_ / (kCarrierBandwidthHz * noise_psd_ * pathloss_);
}

// The noise density is derived from k3 here, so k3 is kept as given rather
// than recomputed through a lossy round trip.
RadioContext::RadioContext(double tx_power_w, double noise_psd_w_per_hz, double pathloss_linear,
                           double k3)
    : tx_power_w_(tx_power_w), noise_psd_(noise_psd_w_per_hz), pathloss_(pathloss_linear), k3_(k3) {}

RadioContext RadioContext::from_k3(double k3) {
  if (!(k3 > 0.0)) {
    throw std::domain_error("k3 must be strictly positive");
  }
  return RadioContext(1.0, 1.0 / (kCarrierBandwidthHz * k3), 1.0, k3);
}

double received_snr(const RadioContext &ctx, const LinkConfig &cfg) {
  validate(cfg);
  return ctx.k3() * freq_factor(cfg.time_factor) * cfg.repetitions;
}

bool is_feasible(const RadioContext &ctx, const LinkConfig &cfg,
                 const SnrThresholdModel &threshold) {
  return received_snr(ctx, cfg) >= snr_threshold(cfg.mcs, threshold);
}

double linear_to_db(double linear) {
  if (!(linear > 0.0)) {
    throw std::domain_error("dB conversion of a non-positive ratio");
  }
  return 10.0 * std::log10(linear);
}

}  // namespace nbiot

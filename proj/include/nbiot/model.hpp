#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>

// NB-IoT uplink coverage-enhancement model: value sets, delay, SNR and
// threshold approximations. Everything here is a pure function of its inputs.

namespace nbiot {

inline constexpr int kMcsMin = 0;
inline constexpr int kMcsMax = 12;
inline constexpr std::array<int, 8> kRepetitions = {1, 2, 4, 8, 16, 32, 64, 128};
inline constexpr std::array<int, 5> kTimeFactors = {1, 2, 4, 8, 32};
inline constexpr std::array<int, 5> kFrequencyFactors = {1, 2, 4, 12, 48};
inline constexpr std::array<int, 5> kToneCounts = {12, 6, 3, 1, 1};
inline constexpr std::array<double, 5> kSubcarrierSpacingKhz = {15.0, 15.0, 15.0, 15.0, 3.75};
inline constexpr double kCarrierBandwidthHz = 180e3;

/// One assignment of (MCS, time factor, repetitions) to a UE.
struct LinkConfig {
  int mcs = kMcsMax;
  int time_factor = 1;
  int repetitions = 1;

  friend bool operator==(const LinkConfig &, const LinkConfig &) = default;
};

bool is_valid_mcs(int m);
bool is_valid_repetitions(int r);
bool is_valid_time_factor(int t);
bool is_valid(const LinkConfig &cfg);
/// Throws std::domain_error naming the offending field.
void validate(const LinkConfig &cfg);

/// Index of t inside kTimeFactors; throws std::domain_error for t outside T.
std::size_t time_factor_index(int t);
int tone_count(int t);
/// 12 tones at 15 kHz is one resource block; a 3.75 kHz tone is a quarter subcarrier.
double subcarriers_used(int t);

/// Tone option mapping t -> f together with the cubic f(t) used by the
/// continuous relaxation.
struct ToneMapping {
  double p1 = -0.004994;
  double p2 = 0.2031;
  double p3 = 0.08811;
  double p4 = 0.834;

  double fit(double t) const { return ((p1 * t + p2) * t + p3) * t + p4; }
  double fit_derivative(double t) const { return (3.0 * p1 * t + 2.0 * p2) * t + p3; }
  /// Mean squared error of the cubic over the five exact (t, f) points.
  double fit_mse() const;
};

/// Exact table lookup. Throws std::domain_error when t is not in T.
int freq_factor(int t);
/// Continuous variant for the relaxed problem; t must lie in [0, 32].
double freq_factor_relaxed(double t, const ToneMapping &mapping = {});

struct TbsModel {
  double a = 0.65;
  double b = 7.5;
  double c = 15.5;
  /// Optional exact per-MCS sizes in bits; used only for integral m.
  std::optional<std::array<double, 13>> table;
};

/// Transport block size in bits. Continuous m in [0, 12] is accepted; the
/// override table is consulted only when m is integral.
double tbs_of_mcs(double m, const TbsModel &model = {});
/// MSE between the quadratic and the configured exact table.
double tbs_fit_mse(const TbsModel &model);

/// Linear SNR threshold at which BLER reaches 0.1, cubic in m.
struct SnrThresholdModel {
  double q1 = 0.001055;
  double q2 = 0.007623;
  double q3 = 0.01359;
  double q4 = 0.3615;
};

double snr_threshold(double m, const SnrThresholdModel &model = {});

/// Timing constants of the uplink data transmission latency. k0 and k1 are in
/// ms, k2 in bits. The raw sub-terms are kept so k1 can be traced back.
struct DelayModelParams {
  double t_pusch_ms = 1.0;
  double t_pdcch_ms = 1.0;
  double rldc = 0.0;
  double t_dus_ms = 8.0;
  double t_uds_ms = 0.0;
  double t_ack_ms = 0.0;
  double rluc = 0.0;
  int resource_units = 1;
  double data_length_bits = 96.0;

  double k0() const { return t_pusch_ms; }
  double k1() const { return rldc * t_pdcch_ms + t_dus_ms + t_uds_ms + rluc * t_ack_ms; }
  double k2() const { return data_length_bits; }
};

void validate(const DelayModelParams &params);

enum class DelayForm { discrete, relaxed };

/// (k1 + k0 r t) * ceil(k2 / TBS(m)). The relaxed form drops the ceiling.
double transmission_delay(const LinkConfig &cfg, const DelayModelParams &params,
                          const TbsModel &tbs = {}, DelayForm form = DelayForm::discrete);
/// Continuous-variable objective of the relaxed problem (no ceiling).
double transmission_delay_relaxed(double m, double t, double r, const DelayModelParams &params,
                                  const TbsModel &tbs = {});
/// ceil(k2 / TBS(m)) as a count of transport blocks.
int transport_blocks(int m, const DelayModelParams &params, const TbsModel &tbs = {});

/// Transmit power, noise density and path loss, all linear.
class RadioContext {
 public:
  RadioContext(double tx_power_w, double noise_psd_w_per_hz, double pathloss_linear);
  /// Context with a given k3 directly (tx power 1 W, unit path loss).
  static RadioContext from_k3(double k3);

  double tx_power_w() const { return tx_power_w_; }
  double noise_psd_w_per_hz() const { return noise_psd_; }
  double pathloss_linear() const { return pathloss_; }
  /// P_TX / (180 kHz * N0 * PL): linear SNR at full bandwidth, one repetition.
  double k3() const { return k3_; }

 private:
  RadioContext(double tx_power_w, double noise_psd_w_per_hz, double pathloss_linear, double k3);

  double tx_power_w_;
  double noise_psd_;
  double pathloss_;
  double k3_;
};

double received_snr(const RadioContext &ctx, const LinkConfig &cfg);
bool is_feasible(const RadioContext &ctx, const LinkConfig &cfg,
                 const SnrThresholdModel &threshold = {});

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear);

}  // namespace nbiot

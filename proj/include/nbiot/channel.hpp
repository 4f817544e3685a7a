#pragma once

#include "nbiot/model.hpp"

// Deployment geometry to per-UE k3, repetition combining and the delivery
// decision at the BLER 0.1 operating point.

namespace nbiot {

enum class PathlossVariant { open_area_hata, urban_hata_with_buildings };

struct PathlossModel {
  PathlossVariant variant = PathlossVariant::open_area_hata;
  double carrier_mhz = 880.0;
  double bs_antenna_height_m = 30.0;
  double ue_antenna_height_m = 1.5;
  double building_penetration_loss_db = 15.0;  // urban only
  double indoor_fraction = 0.85;               // urban only
};

void validate(const PathlossModel &model);

/// Distances past this are outside the classic Hata fit; the formula is
/// extrapolated and callers flag the result.
inline constexpr double kHataMaxDistanceKm = 20.0;
inline bool beyond_hata_validity(double distance_km) { return distance_km > kHataMaxDistanceKm; }

/// Okumura-Hata with the small/medium-city mobile antenna correction. The open
/// area variant subtracts the open-area correction; the urban variant keeps
/// the urban value and adds the building penetration loss for indoor UEs.
double pathloss_db(const PathlossModel &model, double distance_km, bool indoor);

struct LinkBudget {
  double tx_power_dbm = 20.0;
  double enb_tx_power_dbm = 46.0;  // downlink only, not used by the uplink budget
  double noise_psd_dbm_per_hz = -174.0;
  double receiver_noise_figure_db = 5.0;
  /// Fixed additional loss (antenna, cabling, implementation margin).
  double extra_loss_db = 0.0;
};

void validate(const LinkBudget &budget);

/// P_TX / (180 kHz * N0 * PL) with N0 including the receiver noise figure.
double k3_of(const LinkBudget &budget, double pathloss_db);
RadioContext radio_context(const LinkBudget &budget, double pathloss_db);

/// Repetitions are combined at the receiver: SNRs add.
double aggregate_snr(double per_repetition_snr, int repetitions);

/// Step abstraction of the BLER curve: delivered iff the effective SNR reaches
/// the BLER 0.1 threshold of the MCS.
bool packet_delivered(double effective_snr, int mcs, const SnrThresholdModel &model = {});

}  // namespace nbiot

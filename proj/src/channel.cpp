#include "nbiot/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nbiot {

void validate(const PathlossModel &model) {
  if (!(model.carrier_mhz >= 150.0 && model.carrier_mhz <= 1500.0)) {
    throw std::domain_error("carrier " + std::to_string(model.carrier_mhz) +
                            " MHz outside Hata range [150, 1500]");
  }
  if (!(model.bs_antenna_height_m > 0.0) || !(model.ue_antenna_height_m > 0.0)) {
    throw std::domain_error("antenna heights must be positive");
  }
  if (!(model.indoor_fraction >= 0.0 && model.indoor_fraction <= 1.0)) {
    throw std::domain_error("indoor fraction outside [0, 1]");
  }
  if (!std::isfinite(model.building_penetration_loss_db)) {
    throw std::domain_error("building penetration loss must be finite");
  }
}

double pathloss_db(const PathlossModel &model, double distance_km, bool indoor) {
  if (!(distance_km > 0.0)) {
    throw std::domain_error("distance must be positive");
  }
  const double lf = std::log10(model.carrier_mhz);
  const double lhb = std::log10(model.bs_antenna_height_m);
  const double mobile_correction =
      (1.1 * lf - 0.7) * model.ue_antenna_height_m - (1.56 * lf - 0.8);
  const double urban = 69.55 + 26.16 * lf - 13.82 * lhb - mobile_correction +
                       (44.9 - 6.55 * lhb) * std::log10(distance_km);
  switch (model.variant) {
    case PathlossVariant::open_area_hata:
      return urban - 4.78 * lf * lf + 18.33 * lf - 40.94;
    case PathlossVariant::urban_hata_with_buildings:
      return indoor ? urban + model.building_penetration_loss_db : urban;
  }
  throw std::logic_error("unknown path-loss variant");
}

void validate(const LinkBudget &budget) {
  if (!std::isfinite(budget.tx_power_dbm) || !std::isfinite(budget.noise_psd_dbm_per_hz) ||
      !std::isfinite(budget.extra_loss_db)) {
    throw std::domain_error("link budget terms must be finite");
  }
  if (!(budget.receiver_noise_figure_db >= 0.0)) {
    throw std::domain_error("receiver noise figure must be non-negative");
  }
}

double k3_of(const LinkBudget &budget, double pathloss_db) {
  return radio_context(budget, pathloss_db).k3();
}

RadioContext radio_context(const LinkBudget &budget, double pathloss_db) {
  const double tx_w = db_to_linear(budget.tx_power_dbm - 30.0);
  const double n0_w = db_to_linear(budget.noise_psd_dbm_per_hz + budget.receiver_noise_figure_db - 30.0);
  return RadioContext(tx_w, n0_w, db_to_linear(pathloss_db + budget.extra_loss_db));
}

double aggregate_snr(double per_repetition_snr, int repetitions) {
  if (!is_valid_repetitions(repetitions)) {
    throw std::domain_error("invalid repetition count " + std::to_string(repetitions));
  }
  return per_repetition_snr * repetitions;
}

bool packet_delivered(double effective_snr, int mcs, const SnrThresholdModel &model) {
  return effective_snr >= snr_threshold(mcs, model);
}

}  // namespace nbiot

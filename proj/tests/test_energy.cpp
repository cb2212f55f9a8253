#include <doctest.h>

#include <cmath>

#include "uavnet/energy.hpp"

using namespace uavnet;

TEST_SUITE_BEGIN("energy");

TEST_CASE("hover power components") {
  const RotorcraftParams p;  // reference airframe
  const RotorPower rp = blade_and_induced_power(p);
  CHECK(rp.profile == doctest::Approx(580.65).epsilon(1e-3));
  CHECK(rp.induced == doctest::Approx(790.67).epsilon(1e-3));
  CHECK(hover_power(p) == doctest::Approx(1371.32).epsilon(1e-3));

  RotorcraftParams no_drag = p;
  no_drag.profile_drag_coeff = 1e-300;  // validate() requires > 0
  CHECK(blade_and_induced_power(no_drag).profile ==
        doctest::Approx(0.0).epsilon(1e-10));

  RotorcraftParams heavy = p;
  heavy.weight *= 4.0;
  CHECK(blade_and_induced_power(heavy).induced ==
        doctest::Approx(8.0 * rp.induced).epsilon(1e-12));
}

TEST_CASE("propulsion power curve") {
  const RotorcraftParams p;
  CHECK(propulsion_power(p, 0.0) == doctest::Approx(hover_power(p)).epsilon(1e-14));
  CHECK(propulsion_power(p, 22.0) == doctest::Approx(936.32).epsilon(5e-4));
  CHECK_THROWS_AS(propulsion_power(p, -1.0), std::invalid_argument);

  int best = 0;
  double best_power = propulsion_power(p, 0.0);
  for (int v = 1; v <= 80; ++v) {
    if (propulsion_power(p, v) < best_power) {
      best_power = propulsion_power(p, v);
      best = v;
    }
  }
  CHECK(best == 22);
}

TEST_CASE("slot energies") {
  const ScenarioConfig scenario = default_scenario();
  const double suc =
      slot_energy(Scheme::Suc, scenario.rotorcraft, scenario.traffic,
                  scenario.kinematics);
  CHECK(suc == doctest::Approx(17649.0).epsilon(1e-3));

  const double urdc_base =
      slot_energy(Scheme::Urdc, scenario.rotorcraft, scenario.traffic,
                  scenario.kinematics, false);
  // independent arithmetic for the base value
  const double expected = propulsion_power(scenario.rotorcraft, 22.0) * 6.4365 +
                          (hover_power(scenario.rotorcraft) + 0.05) * 6.4365;
  CHECK(urdc_base == doctest::Approx(expected).epsilon(1e-12));
  CHECK(urdc_base == doctest::Approx(14853.5).epsilon(1e-4));

  // coinciding schemes when the whole slot is transmission
  ScenarioConfig merged = scenario;
  merged.traffic.travel_time = 0.0;
  merged.traffic.tx_duration = merged.traffic.slot_duration;
  CHECK(slot_energy(Scheme::Urdc, merged.rotorcraft, merged.traffic,
                    merged.kinematics) ==
        doctest::Approx(slot_energy(Scheme::Suc, merged.rotorcraft,
                                    merged.traffic, merged.kinematics))
            .epsilon(1e-12));
}

TEST_CASE("ramp surcharge") {
  const ScenarioConfig scenario = default_scenario();
  const double surcharge = acceleration_surcharge(
      scenario.rotorcraft, scenario.traffic, scenario.kinematics);
  CHECK(surcharge == doctest::Approx(716.5).epsilon(0.01));
  const double total =
      slot_energy(Scheme::Urdc, scenario.rotorcraft, scenario.traffic,
                  scenario.kinematics, true);
  CHECK(total == doctest::Approx(15568.0).epsilon(0.001));
  // zero travel time leaves nothing to surcharge
  ScenarioConfig still = scenario;
  still.traffic.travel_time = 0.0;
  CHECK(acceleration_surcharge(still.rotorcraft, still.traffic,
                               still.kinematics) == 0.0);
}

TEST_CASE("energy efficiency viewpoints") {
  const ScenarioConfig s = default_scenario();
  CHECK(energy_efficiency(Scheme::Urdc, EnergyViewpoint::Uav, 0.0, s.traffic,
                          s.rotorcraft, s.kinematics, 1e-3) == 0.0);
  CHECK_THROWS_AS(
      energy_efficiency(Scheme::Urdc, EnergyViewpoint::Uav, -1.0, s.traffic,
                        s.rotorcraft, s.kinematics, 1e-3),
      std::invalid_argument);

  const double capacity = 5e5;
  CHECK(energy_efficiency(Scheme::Suc, EnergyViewpoint::Device, capacity,
                          s.traffic, s.rotorcraft, s.kinematics, 1e-3) ==
        doctest::Approx(capacity / 1e-3).epsilon(1e-14));
  CHECK(energy_efficiency(Scheme::Urdc, EnergyViewpoint::Device, capacity,
                          s.traffic, s.rotorcraft, s.kinematics, 1e-3) ==
        doctest::Approx(capacity * s.traffic.slot_duration /
                        (1e-3 * s.traffic.tx_duration))
            .epsilon(1e-14));
}

TEST_SUITE_END();

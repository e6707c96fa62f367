// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace lkb::testing {

struct ToyDocument {
  std::string source;
  std::string content;
};

// Three short maintenance manuals used by the service-level tests.
inline const std::vector<ToyDocument>& toy_documents() {
  static const std::vector<ToyDocument> docs = {
      {"hst_manual.txt",
       "Hydrostatic transmission overview.\n\n"
       "The hydrostatic transmission couples a variable displacement pump to a fixed motor. "
       "Charge pressure must stay between 18 and 25 bar during operation.\n\n"
       "If the transmission whines under load, check the charge filter first. A clogged "
       "filter starves the pump and the oil temperature climbs quickly.\n\n"
       "Replace the hydraulic oil every 1000 operating hours and flush the cooler."},
      {"turbine_gearbox.md",
       "# Gearbox maintenance\n\n"
       "The main gearbox of the wind turbine carries the rotor torque to the generator.\n\n"
       "## Oil\n"
       "Sample the gearbox oil every six months. Particle counts above the limit point to "
       "bearing wear in the intermediate stage.\n\n"
       "## Alarms\n"
       "A high oil temperature alarm above 80 degrees usually means the cooler fan has "
       "failed or the oil level is low."},
      {"fault_codes.csv",
       "code,component,action\n"
       "E101,pitch motor,reset the pitch converter and check the encoder cable\n"
       "E205,yaw drive,inspect the yaw brake pads for glazing\n"
       "E317,generator,measure the slip ring brush length and replace worn brushes\n"
       "E420,hydraulic unit,top up the accumulator pre-charge with nitrogen"},
  };
  return docs;
}

}  // namespace lkb::testing

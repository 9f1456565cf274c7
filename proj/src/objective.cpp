// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "passim/objective.hpp"

#include "passim/downlink.hpp"
#include "passim/uplink.hpp"

namespace passim {

std::unique_ptr<ElementwiseObjective> make_objective(Link link, Scheme scheme,
                                                     const ScenarioConfig& cfg) {
  if (link == Link::downlink) {
    switch (scheme) {
      case Scheme::matched:
        return std::make_unique<DlMrtObjective>(cfg.power_dl_w, cfg.noise_w);
      case Scheme::zero_forcing:
        return std::make_unique<DlZfObjective>(cfg.power_dl_w, cfg.noise_w);
      case Scheme::mmse:
        return std::make_unique<DlMmseObjective>(cfg.power_dl_w, cfg.noise_w,
                                                 cfg.num_users);
    }
  } else {
    switch (scheme) {
      case Scheme::matched:
        return std::make_unique<UlMrcObjective>(cfg.power_ul_w, cfg.noise_w);
      case Scheme::zero_forcing:
        return std::make_unique<UlZfObjective>(cfg.power_ul_w, cfg.noise_w);
      case Scheme::mmse:
        return std::make_unique<UlMmseObjective>(cfg.power_ul_w, cfg.noise_w);
    }
  }
  throw std::logic_error("unknown scheme");
}

}  // namespace passim

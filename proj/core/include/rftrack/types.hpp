#pragma once

#include <cstdint>

#include "rftrack/geometry.hpp"

namespace rftrack {

/// Ground-truth target: one radio tag on a unique frequency channel.
struct TargetTruth {
    int id = 0;
    int frequency_channel = 0;
    Position3 position;
};

/// One received RSSI pulse, tagged with the pose it was received at.
struct Measurement {
    double rssi = 0.0;          // dBm
    int frequency_channel = 0;  // maps 1:1 to a target id
    UavState uav_state_at_rx;
    double time = 0.0;  // seconds
};

/// Rotate-then-move-forward control action.
struct Action {
    double target_heading = 0.0;  // radians, from the discrete heading set
    int index = 0;                // position in the enumerated action set
};

/// Random-walk target motion: identity transition, isotropic xy noise,
/// degenerate z.
struct MotionModel {
    double sigma_q = 2.0;  // m/s per axis (x, y); z variance is exactly 0
};

}  // namespace rftrack

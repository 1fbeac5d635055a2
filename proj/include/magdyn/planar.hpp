#pragma once

#include "magdyn/mat.hpp"
#include "magdyn/transfer.hpp"

namespace magdyn {

/// Rotational x oscillatory split of the planar evolution:
/// u = R(phi) * blockdiag(h, h).
struct PlanarMap {
    Mat2 osc;
    double phi = 0.0;
    Mat4 composed;
};

/// Positive phi rotates (x,y) -> (x cos phi + y sin phi, -x sin phi + y cos phi),
/// the drift sense of a positive field: the planar Hamilton equations give
/// xdot = px + beta*y, so a free rotation with beta > 0 carries +x toward -y.
inline PlanarMap compose_planar(const TransferMatrix& osc, double phi) {
    PlanarMap p;
    p.osc = osc.h;
    p.phi = phi;
    p.composed = pair_rotation(phi) * block_diag(osc.h);
    return p;
}

} // namespace magdyn

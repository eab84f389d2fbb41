#include "grid.hpp"

namespace eglab {

void PhaseGrid::validate() const {
    if (dof != 1) throw DomainError("PhaseGrid: only n = 1 degree of freedom is supported");
    if (!is_pow2(m) || m < 8) throw DomainError("PhaseGrid: points per axis must be a power of two >= 8");
    if (!(extent > 0)) throw DomainError("PhaseGrid: extent must be positive");
}

void PositionGrid::validate() const {
    if (!is_pow2(m) || m < 8) throw DomainError("PositionGrid: points must be a power of two >= 8");
    if (!(extent > 0)) throw DomainError("PositionGrid: extent must be positive");
    if (!(hbar > 0)) throw DomainError("PositionGrid: hbar must be positive");
}

PositionGrid position_grid(const PhaseGrid& g, double hbar) {
    g.validate();
    if (!(hbar > 0)) throw DomainError("position_grid: hbar must be positive");
    return PositionGrid{g.m, g.extent, hbar};
}

} // namespace eglab

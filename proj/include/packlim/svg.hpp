#pragma once

#include "packlim/certificate.hpp"

#include <string>

namespace packlim {

/// Deterministic SVG 1.1 drawing of a 2-D certificate: target outline plus
/// the placed pieces as labeled polygons. Viewport is the target bounding box
/// (placements for unbounded targets) padded by 5%. Throws for dim != 2.
std::string render_svg(const AnyCertificate& cert);

} // namespace packlim

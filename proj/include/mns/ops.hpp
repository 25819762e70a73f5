#pragma once

#include <functional>
#include <utility>

#include "mns/field.hpp"

namespace mns {

// Spectral operators accept either representation and return spectral fields.

ScalarField d1(const ScalarField& f);
ScalarField d2(const ScalarField& f);
std::pair<ScalarField, ScalarField> grad(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);

/// Horizontal divergence d1 V1 + d2 V2.
ScalarField div2(const VectorField& v);

/// Curl of a three-component field of (x1, x2):
/// (d2 V3, -d1 V3, d1 V2 - d2 V1).
VectorField curl25(const VectorField& v);

/// Gradient of a scalar lifted to three components, (d1 g, d2 g, 0).
VectorField grad3(const ScalarField& g);
VectorField laplacian(const VectorField& v);

/// Leray projection of the horizontal pair; V3 and the k = 0 mode pass through.
VectorField leray_project(const VectorField& v);

/// 2/3-rule truncation: zero every mode with max(|k1|, |k2|) > (2*pi/L) n/3.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& v);

/// Multiplies each spectral coefficient by mask(flat index).
ScalarField apply_multiplier(const ScalarField& f, const std::function<double(std::size_t)>& mask);

// Pointwise operators require physical inputs and return physical fields.

ScalarField multiply(const ScalarField& a, const ScalarField& b);
ScalarField dot(const VectorField& a, const VectorField& b);
VectorField cross(const VectorField& a, const VectorField& b);
/// (a . grad) b with the gradient taken spectrally; a physical, b any.
VectorField advect(const VectorField& a, const VectorField& b);

}  // namespace mns

#pragma once

// Image -> token sequence: non-overlapping patches in raster order, flattened
// RGB rows, linear projection plus learned positional table.

#include "asc/image.hpp"
#include "asc/tensor.hpp"

namespace asc {

// N x (3*p*p) matrix, one flattened patch per row.
TensorPtr extract_patches(const Image& img, int patch_size);

// Inverse of extract_patches; used to verify the pixel bijection.
Image reassemble_patches(const TensorPtr& patches, int height, int width, int patch_size);

// tokens = patches * proj + bias (+ positional[0..N)). Throws if N exceeds
// the positional table.
TensorPtr embed_patches(Graph& g, const TensorPtr& patches, const TensorPtr& proj,
                        const TensorPtr& bias, const TensorPtr& positional,
                        bool use_positional);

} // namespace asc

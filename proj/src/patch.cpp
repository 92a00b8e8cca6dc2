#include "asc/patch.hpp"

#include <stdexcept>

namespace asc {

TensorPtr extract_patches(const Image& img, int patch_size) {
    const int p = patch_size;
    if (p <= 0) throw std::invalid_argument("patch size must be positive");
    if (img.height % p != 0 || img.width % p != 0) {
        throw std::invalid_argument("image dimensions not divisible by patch size");
    }
    const int rows = img.height / p, cols = img.width / p;
    const int n = rows * cols, d = 3 * p * p;
    TensorPtr out = make_tensor({n, d});
    for (int pr = 0; pr < rows; ++pr) {
        for (int pc = 0; pc < cols; ++pc) {
            const int r = pr * cols + pc;
            int k = 0;
            for (int y = 0; y < p; ++y)
                for (int x = 0; x < p; ++x)
                    for (int c = 0; c < 3; ++c)
                        out->at(r, k++) = img.at(pr * p + y, pc * p + x, c);
        }
    }
    return out;
}

Image reassemble_patches(const TensorPtr& patches, int height, int width, int patch_size) {
    const int p = patch_size;
    const int rows = height / p, cols = width / p;
    if (patches->rows() != rows * cols || patches->cols() != 3 * p * p) {
        throw std::invalid_argument("patch matrix does not match target dimensions");
    }
    Image img(height, width);
    for (int pr = 0; pr < rows; ++pr) {
        for (int pc = 0; pc < cols; ++pc) {
            const int r = pr * cols + pc;
            int k = 0;
            for (int y = 0; y < p; ++y)
                for (int x = 0; x < p; ++x)
                    for (int c = 0; c < 3; ++c)
                        img.at(pr * p + y, pc * p + x, c) = patches->at(r, k++);
        }
    }
    return img;
}

TensorPtr embed_patches(Graph& g, const TensorPtr& patches, const TensorPtr& proj,
                        const TensorPtr& bias, const TensorPtr& positional,
                        bool use_positional) {
    if (patches->cols() != proj->rows()) {
        throw std::invalid_argument("patch length does not match projection input extent");
    }
    const int n = patches->rows();
    TensorPtr tokens = add_rowvec(g, matmul(g, patches, proj), bias);
    if (use_positional) {
        if (n > positional->rows()) {
            throw std::invalid_argument("token count exceeds positional table capacity");
        }
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        tokens = add(g, tokens, gather_rows(g, positional, idx));
    }
    return tokens;
}

} // namespace asc

#include "gbeval/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include "gbeval/errors.hpp"

namespace gbeval {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct ReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~ReadCtx() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct WriteCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~WriteCtx() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

// Raw grayscale samples; 16-bit values are already host-order.
struct GraySamples {
    int width = 0;
    int height = 0;
    int bit_depth = 0;
    std::vector<uint16_t> samples;
};

GraySamples read_gray_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw InputError("cannot open PNG file: " + path.string());

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw InputError("not a PNG file: " + path.string());

    ReadCtx ctx;
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw InputError("libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw InputError("libpng init failed");

    // locals touched after setjmp are constructed before it
    GraySamples out;
    std::vector<png_byte> rowbuf;

    if (setjmp(png_jmpbuf(ctx.png)))
        throw InputError("failed to decode PNG: " + path.string());

    png_init_io(ctx.png, fp.get());
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    const int color_type = png_get_color_type(ctx.png, ctx.info);
    const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);

    if (w == 0 || h == 0) throw InputError("zero-sized PNG: " + path.string());
    if (color_type != PNG_COLOR_TYPE_GRAY)
        throw InputError("expected single-channel grayscale PNG: " + path.string());
    if (bit_depth != 8 && bit_depth != 16)
        throw InputError("expected 8-bit or 16-bit grayscale PNG, got " +
                         std::to_string(bit_depth) + "-bit: " + path.string());

    png_set_interlace_handling(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    out.bit_depth = bit_depth;
    out.samples.resize(static_cast<size_t>(w) * h);

    const size_t rowbytes = png_get_rowbytes(ctx.png, ctx.info);
    rowbuf.resize(rowbytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 r = 0; r < h; ++r) rows[r] = rowbuf.data() + rowbytes * r;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    for (png_uint_32 r = 0; r < h; ++r) {
        const png_byte* src = rows[r];
        uint16_t* dst = out.samples.data() + static_cast<size_t>(r) * w;
        if (bit_depth == 8) {
            for (png_uint_32 c = 0; c < w; ++c) dst[c] = src[c];
        } else {
            // PNG stores 16-bit samples big-endian
            for (png_uint_32 c = 0; c < w; ++c)
                dst[c] = static_cast<uint16_t>((src[2 * c] << 8) | src[2 * c + 1]);
        }
    }
    return out;
}

void write_png(const std::filesystem::path& path, int width, int height, int color_type,
               int bit_depth, const std::vector<png_byte>& bytes) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw InputError("cannot write PNG file: " + path.string());

    WriteCtx ctx;
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw InputError("libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw InputError("libpng init failed");

    std::vector<png_bytep> rows(height);

    if (setjmp(png_jmpbuf(ctx.png)))
        throw InputError("failed to encode PNG: " + path.string());

    png_init_io(ctx.png, fp.get());
    png_set_IHDR(ctx.png, ctx.info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);

    const size_t channels = (color_type == PNG_COLOR_TYPE_RGB) ? 3 : 1;
    const size_t rowbytes = static_cast<size_t>(width) * channels * (bit_depth / 8);
    for (int r = 0; r < height; ++r)
        rows[r] = const_cast<png_bytep>(bytes.data() + rowbytes * r);
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
}

}  // namespace

void validate(const ProbabilityMap& map) {
    if (map.width <= 0 || map.height <= 0) throw DataError("probability map has empty dimensions");
    if (map.values.size() != map.pixel_count())
        throw DataError("probability map value count does not match dimensions");
    for (double v : map.values)
        if (!(v >= 0.0 && v <= 1.0)) throw DataError("probability value outside [0,1]");
}

ProbabilityMap load_probability_map(const std::filesystem::path& path) {
    int depth = 0;
    return load_probability_map(path, depth);
}

ProbabilityMap load_probability_map(const std::filesystem::path& path, int& source_depth) {
    GraySamples g = read_gray_png(path);
    source_depth = g.bit_depth;
    const double s_max = (g.bit_depth == 8) ? 255.0 : 65535.0;
    ProbabilityMap map{g.width, g.height, std::vector<double>(g.samples.size())};
    for (size_t i = 0; i < g.samples.size(); ++i) map.values[i] = g.samples[i] / s_max;
    return map;
}

BinaryMask load_mask(const std::filesystem::path& path, bool lenient) {
    GraySamples g = read_gray_png(path);
    if (g.bit_depth != 8)
        throw InputError("mask PNG must be 8-bit grayscale: " + path.string());
    BinaryMask mask{g.width, g.height, std::vector<uint8_t>(g.samples.size())};
    for (size_t i = 0; i < g.samples.size(); ++i) {
        const uint16_t s = g.samples[i];
        if (lenient) {
            mask.values[i] = s >= 128 ? 1 : 0;
        } else {
            if (s != 0 && s != 255)
                throw DataError("mask pixel " + std::to_string(s) + " is not 0 or 255 (strict mode): " +
                                path.string());
            mask.values[i] = s == 255 ? 1 : 0;
        }
    }
    return mask;
}

void save_probability_map(const ProbabilityMap& map, const std::filesystem::path& path,
                          int depth) {
    validate(map);
    if (depth != 8 && depth != 16) throw ConfigError("PNG depth must be 8 or 16");
    const size_t n = map.pixel_count();
    std::vector<png_byte> bytes;
    if (depth == 8) {
        bytes.resize(n);
        for (size_t i = 0; i < n; ++i)
            bytes[i] = static_cast<png_byte>(std::lround(map.values[i] * 255.0));
    } else {
        bytes.resize(2 * n);
        for (size_t i = 0; i < n; ++i) {
            const uint16_t s = static_cast<uint16_t>(std::lround(map.values[i] * 65535.0));
            bytes[2 * i] = static_cast<png_byte>(s >> 8);
            bytes[2 * i + 1] = static_cast<png_byte>(s & 0xff);
        }
    }
    write_png(path, map.width, map.height, PNG_COLOR_TYPE_GRAY, depth, bytes);
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    if (mask.values.size() != mask.pixel_count())
        throw DataError("mask value count does not match dimensions");
    std::vector<png_byte> bytes(mask.pixel_count());
    for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.values[i] ? 255 : 0;
    write_png(path, mask.width, mask.height, PNG_COLOR_TYPE_GRAY, 8, bytes);
}

void save_rgb(const RgbImage& img, const std::filesystem::path& path) {
    if (img.values.size() != 3 * img.pixel_count())
        throw DataError("RGB value count does not match dimensions");
    std::vector<png_byte> bytes(img.values.begin(), img.values.end());
    write_png(path, img.width, img.height, PNG_COLOR_TYPE_RGB, 8, bytes);
}

}  // namespace gbeval

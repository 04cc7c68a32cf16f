#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "plr/errors.hpp"

namespace plr {

struct ImageRGB8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, 3 bytes per pixel

    ImageRGB8() = default;
    ImageRGB8(int w, int h)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t* at(int x, int y) {
        return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    const std::uint8_t* at(int x, int y) const {
        return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
};

struct ImageGray8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    ImageGray8() = default;
    ImageGray8(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

namespace detail {

// Next header integer; skips whitespace and '#' comments, consumes the single
// separator after the digits (which for maxval is the byte before the raster).
inline int pnm_int(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c == '#' || std::isspace(c)) {
        if (c == '#')
            while (c != '\n' && c != EOF) c = in.get();
        c = in.get();
    }
    if (!std::isdigit(c))
        throw ParseError(path + ": malformed header");
    long value = 0;
    while (std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 20)
            throw ParseError(path + ": header value out of range");
        c = in.get();
    }
    return static_cast<int>(value);
}

inline void read_raster(std::istream& in, std::vector<std::uint8_t>& out, const std::string& path) {
    in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (in.gcount() != static_cast<std::streamsize>(out.size()))
        throw ParseError(path + ": truncated pixel data");
}

inline void check_pnm_dims(int w, int h, int maxval, const std::string& path) {
    if (w <= 0 || h <= 0)
        throw ParseError(path + ": bad image dimensions");
    if (maxval != 255)
        throw ParseError(path + ": only maxval 255 is supported");
}

}  // namespace detail

inline ImageRGB8 read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("read_ppm: cannot open " + path);
    char magic[2] = {};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '6')
        throw ParseError(path + ": not a binary PPM (P6)");
    const int w = detail::pnm_int(in, path);
    const int h = detail::pnm_int(in, path);
    const int maxval = detail::pnm_int(in, path);
    detail::check_pnm_dims(w, h, maxval, path);
    ImageRGB8 img(w, h);
    detail::read_raster(in, img.pixels, path);
    return img;
}

inline ImageGray8 read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("read_pgm: cannot open " + path);
    char magic[2] = {};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        throw ParseError(path + ": not a binary PGM (P5)");
    const int w = detail::pnm_int(in, path);
    const int h = detail::pnm_int(in, path);
    const int maxval = detail::pnm_int(in, path);
    detail::check_pnm_dims(w, h, maxval, path);
    ImageGray8 img(w, h);
    detail::read_raster(in, img.pixels, path);
    return img;
}

// Texture loader: accepts P6, or P5 promoted to grey RGB.
inline ImageRGB8 read_texture_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe)
        throw std::invalid_argument("read_texture_image: cannot open " + path);
    char magic[2] = {};
    probe.read(magic, 2);
    probe.close();
    if (magic[0] == 'P' && magic[1] == '6')
        return read_ppm(path);
    if (magic[0] == 'P' && magic[1] == '5') {
        const ImageGray8 grey = read_pgm(path);
        ImageRGB8 img(grey.width, grey.height);
        for (std::size_t i = 0; i < grey.pixels.size(); ++i) {
            img.pixels[3 * i] = grey.pixels[i];
            img.pixels[3 * i + 1] = grey.pixels[i];
            img.pixels[3 * i + 2] = grey.pixels[i];
        }
        return img;
    }
    throw ParseError(path + ": not a PPM/PGM image");
}

inline void write_ppm(const std::string& path, const ImageRGB8& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("write_ppm: cannot open " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out)
        throw std::runtime_error("write_ppm: write failed for " + path);
}

inline void write_pgm(const std::string& path, const ImageGray8& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("write_pgm: cannot open " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out)
        throw std::runtime_error("write_pgm: write failed for " + path);
}

}  // namespace plr

#include "indmath/pgm.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

namespace indmath::io {

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    return tok;
}

int parse_positive(const std::string& tok, const char* what) {
    try {
        size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size() || v <= 0) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw CorruptHeader(std::string("bad PGM header value for ") + what +
                            ": '" + tok + "'");
    }
}

}  // namespace

imaging::GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("cannot open image file: " + path);

    const std::string magic = next_token(in);
    if (magic.empty()) throw CorruptHeader(path + ": empty file");
    if (magic == "P6" || magic == "P3")
        throw UnsupportedFormat(path + ": color PNM not supported, expected P5");
    if (magic != "P5")
        throw UnsupportedFormat(path + ": expected binary PGM magic P5, got '" +
                                magic + "'");

    const int width = parse_positive(next_token(in), "width");
    const int height = parse_positive(next_token(in), "height");
    const int maxval = parse_positive(next_token(in), "maxval");
    if (maxval != 255)
        throw UnsupportedFormat(path + ": only maxval 255 supported, got " +
                                std::to_string(maxval));

    std::vector<unsigned char> raw(static_cast<size_t>(width) * height);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size())
        throw CorruptHeader(path + ": truncated pixel data");

    imaging::GrayImage img(width, height);
    for (size_t i = 0; i < raw.size(); ++i) img.pixels[i] = raw[i];
    return img;
}

void write_pgm(const imaging::GrayImage& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != static_cast<size_t>(img.width) * img.height)
        throw IoFailure("refusing to write malformed image");

    const std::filesystem::path target(path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot open for writing: " + tmp.string());
        out << "P5\n" << img.width << " " << img.height << "\n255\n";
        std::vector<unsigned char> raw(img.pixels.size());
        for (size_t i = 0; i < raw.size(); ++i) {
            const double v = std::lround(std::min(255.0, std::max(0.0, img.pixels[i])));
            raw[i] = static_cast<unsigned char>(v);
        }
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size()));
        if (!out) throw IoFailure("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoFailure("cannot move output into place: " + path);
    }
}

}  // namespace indmath::io

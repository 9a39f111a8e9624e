#include "anicv/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace anicv {

double Raster::min_value() const { return *std::min_element(pixels.begin(), pixels.end()); }
double Raster::max_value() const { return *std::max_element(pixels.begin(), pixels.end()); }

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

int next_pnm_int(std::istream& in) {
    // Skips whitespace and '#' comments.
    while (true) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int v;
    if (!(in >> v)) throw IoError("truncated PGM header");
    return v;
}

Raster read_pgm(std::istream& in, bool binary) {
    int w = next_pnm_int(in);
    int h = next_pnm_int(in);
    int maxval = next_pnm_int(in);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) throw IoError("bad PGM header");
    Raster r(w, h);
    if (binary) {
        in.get(); // single whitespace after maxval
        int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> buf(static_cast<size_t>(w) * h * bytes);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() != static_cast<std::streamsize>(buf.size()))
            throw IoError("truncated PGM data");
        for (int i = 0; i < w * h; ++i) {
            int v = bytes == 1 ? buf[i] : (buf[2 * i] << 8) | buf[2 * i + 1];
            r.pixels[i] = clamp01(static_cast<double>(v) / maxval);
        }
    } else {
        for (int i = 0; i < w * h; ++i) {
            int v;
            if (!(in >> v)) throw IoError("truncated PGM data");
            r.pixels[i] = clamp01(static_cast<double>(v) / maxval);
        }
    }
    return r;
}

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

Raster read_png(const std::string& path) {
    PngReadCloser c;
    c.fp = std::fopen(path.c_str(), "rb");
    if (!c.fp) throw IoError("cannot open PNG file: " + path);
    c.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!c.png) throw IoError("libpng init failed");
    c.info = png_create_info_struct(c.png);
    if (!c.info) throw IoError("libpng init failed");
    if (setjmp(png_jmpbuf(c.png))) throw IoError("invalid PNG file: " + path);

    png_init_io(c.png, c.fp);
    png_read_info(c.png, c.info);
    png_uint_32 w = png_get_image_width(c.png, c.info);
    png_uint_32 h = png_get_image_height(c.png, c.info);
    int color = png_get_color_type(c.png, c.info);
    int depth = png_get_bit_depth(c.png, c.info);

    if (color == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_strip_alpha(c.png);
    else if (color != PNG_COLOR_TYPE_GRAY)
        throw IoError("PNG must be grayscale: " + path);
    if (depth < 8) {
        png_set_expand_gray_1_2_4_to_8(c.png);
        depth = 8;
    }
    png_read_update_info(c.png, c.info);

    size_t rowbytes = png_get_rowbytes(c.png, c.info);
    std::vector<unsigned char> data(rowbytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = data.data() + y * rowbytes;
    png_read_image(c.png, rows.data());

    Raster r(static_cast<int>(w), static_cast<int>(h));
    double maxval = depth == 16 ? 65535.0 : 255.0;
    for (png_uint_32 y = 0; y < h; ++y)
        for (png_uint_32 x = 0; x < w; ++x) {
            int v = depth == 16 ? (rows[y][2 * x] << 8) | rows[y][2 * x + 1] : rows[y][x];
            r.at(static_cast<int>(x), static_cast<int>(y)) = clamp01(v / maxval);
        }
    return r;
}

struct PngWriteCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngWriteCloser() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

} // namespace

Raster read_raster_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open raster file: " + path);
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 == 'P' && (m1 == '2' || m1 == '5')) return read_pgm(in, m1 == '5');
    if (m0 == char(0x89) && m1 == 'P') {
        in.close();
        return read_png(path);
    }
    throw IoError("unrecognised raster format (want PGM or PNG): " + path);
}

void write_pgm_file(const std::string& path, const Raster& r, int maxval, bool binary) {
    if (maxval <= 0 || maxval > 65535) throw IoError("bad PGM maxval");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write PGM file: " + path);
    out << (binary ? "P5" : "P2") << '\n' << r.width << ' ' << r.height << '\n' << maxval << '\n';
    for (int y = 0; y < r.height; ++y)
        for (int x = 0; x < r.width; ++x) {
            int v = static_cast<int>(std::lround(clamp01(r.at(x, y)) * maxval));
            if (binary) {
                if (maxval > 255) out.put(static_cast<char>(v >> 8));
                out.put(static_cast<char>(v & 0xff));
            } else {
                out << v << (x + 1 == r.width ? '\n' : ' ');
            }
        }
    if (!out) throw IoError("short write: " + path);
}

void write_png_file(const std::string& path, const Raster& r, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) throw IoError("PNG bit depth must be 8 or 16");
    PngWriteCloser c;
    c.fp = std::fopen(path.c_str(), "wb");
    if (!c.fp) throw IoError("cannot write PNG file: " + path);
    c.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!c.png) throw IoError("libpng init failed");
    c.info = png_create_info_struct(c.png);
    if (!c.info) throw IoError("libpng init failed");
    if (setjmp(png_jmpbuf(c.png))) throw IoError("PNG write failed: " + path);

    png_init_io(c.png, c.fp);
    png_set_IHDR(c.png, c.info, r.width, r.height, bit_depth, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(c.png, c.info);

    double maxval = bit_depth == 16 ? 65535.0 : 255.0;
    int bytes = bit_depth / 8;
    std::vector<unsigned char> row(static_cast<size_t>(r.width) * bytes);
    for (int y = 0; y < r.height; ++y) {
        for (int x = 0; x < r.width; ++x) {
            int v = static_cast<int>(std::lround(clamp01(r.at(x, y)) * maxval));
            if (bytes == 2) {
                row[2 * x] = static_cast<unsigned char>(v >> 8);
                row[2 * x + 1] = static_cast<unsigned char>(v & 0xff);
            } else {
                row[x] = static_cast<unsigned char>(v);
            }
        }
        png_write_row(c.png, row.data());
    }
    png_write_end(c.png, nullptr);
}

void write_raster_file(const std::string& path, const Raster& r) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".png")
        write_png_file(path, r);
    else
        write_pgm_file(path, r);
}

Raster rasterize(const PcrImage& f, int width, int height) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("raster size must be positive");
    Rect dom = f.grid()->domain();
    Raster r(width, height);
    r.pitch = dom.width() / width;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double px = dom.x0 + (x + 0.5) * dom.width() / width;
            double py = dom.y1 - (y + 0.5) * dom.height() / height;
            r.at(x, y) = f.value(f.grid()->cell_at(px, py));
        }
    return r;
}

double boundary_on_grid_fraction(const Raster& labels, const Grid& grid) {
    Rect dom = grid.domain();
    double px = dom.width() / labels.width, py = dom.height() / labels.height;
    auto near_line = [](const std::vector<double>& lines, double v, double tol) {
        auto it = std::lower_bound(lines.begin(), lines.end(), v);
        if (it != lines.end() && std::abs(*it - v) <= tol) return true;
        if (it != lines.begin() && std::abs(*(it - 1) - v) <= tol) return true;
        return false;
    };
    double total = 0, on_grid = 0;
    for (int y = 0; y < labels.height; ++y)
        for (int x = 0; x < labels.width; ++x) {
            if (x + 1 < labels.width && labels.at(x, y) != labels.at(x + 1, y)) {
                total += py;
                if (near_line(grid.xlines(), dom.x0 + (x + 1) * px, 0.5 * px)) on_grid += py;
            }
            if (y + 1 < labels.height && labels.at(x, y) != labels.at(x, y + 1)) {
                total += px;
                if (near_line(grid.ylines(), dom.y1 - (y + 1) * py, 0.5 * py)) on_grid += px;
            }
        }
    return total > 0 ? on_grid / total : 1.0;
}

PcrImage raster_to_pcr(const Raster& r, double x0, double y0) {
    std::vector<double> xs(r.width + 1), ys(r.height + 1);
    for (int i = 0; i <= r.width; ++i) xs[i] = x0 + i * r.pitch;
    for (int j = 0; j <= r.height; ++j) ys[j] = y0 + j * r.pitch;
    GridPtr g = make_grid(std::move(xs), std::move(ys));
    std::vector<double> vals(r.pixel_count());
    for (int y = 0; y < r.height; ++y)
        for (int x = 0; x < r.width; ++x)
            vals[g->cell_index(x, r.height - 1 - y)] = r.at(x, y);
    return PcrImage(std::move(g), std::move(vals));
}

} // namespace anicv

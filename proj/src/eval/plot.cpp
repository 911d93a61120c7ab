#include "pcfl/eval/plot.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include "pcfl/common.hpp"

namespace pcfl::eval {

namespace {

// ---- 5x7 bitmap font (one byte per row, low 5 bits used, MSB leftmost) ----

using Glyph = std::array<std::uint8_t, 7>;

const Glyph* find_glyph(char ch) {
    static const std::map<char, Glyph> table = {
        {' ', {0, 0, 0, 0, 0, 0, 0}},
        {'.', {0, 0, 0, 0, 0, 0x0c, 0x0c}},
        {',', {0, 0, 0, 0, 0x0c, 0x04, 0x08}},
        {':', {0, 0x0c, 0x0c, 0, 0x0c, 0x0c, 0}},
        {'-', {0, 0, 0, 0x1f, 0, 0, 0}},
        {'+', {0, 0x04, 0x04, 0x1f, 0x04, 0x04, 0}},
        {'_', {0, 0, 0, 0, 0, 0, 0x1f}},
        {'/', {0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10}},
        {'#', {0x0a, 0x0a, 0x1f, 0x0a, 0x1f, 0x0a, 0x0a}},
        {'=', {0, 0, 0x1f, 0, 0x1f, 0, 0}},
        {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
        {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
        {'%', {0x19, 0x1a, 0x02, 0x04, 0x08, 0x0b, 0x13}},
        {'0', {0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e}},
        {'1', {0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e}},
        {'2', {0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f}},
        {'3', {0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e}},
        {'4', {0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02}},
        {'5', {0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e}},
        {'6', {0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e}},
        {'7', {0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
        {'8', {0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e}},
        {'9', {0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c}},
        {'A', {0x0e, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11}},
        {'B', {0x1e, 0x11, 0x11, 0x1e, 0x11, 0x11, 0x1e}},
        {'C', {0x0e, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0e}},
        {'D', {0x1c, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1c}},
        {'E', {0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x1f}},
        {'F', {0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x10}},
        {'G', {0x0e, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0f}},
        {'H', {0x11, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11}},
        {'I', {0x0e, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0e}},
        {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0c}},
        {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
        {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1f}},
        {'M', {0x11, 0x1b, 0x15, 0x15, 0x11, 0x11, 0x11}},
        {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
        {'O', {0x0e, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e}},
        {'P', {0x1e, 0x11, 0x11, 0x1e, 0x10, 0x10, 0x10}},
        {'Q', {0x0e, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0d}},
        {'R', {0x1e, 0x11, 0x11, 0x1e, 0x14, 0x12, 0x11}},
        {'S', {0x0f, 0x10, 0x10, 0x0e, 0x01, 0x01, 0x1e}},
        {'T', {0x1f, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
        {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e}},
        {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0a, 0x04}},
        {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0a}},
        {'X', {0x11, 0x11, 0x0a, 0x04, 0x0a, 0x11, 0x11}},
        {'Y', {0x11, 0x11, 0x0a, 0x04, 0x04, 0x04, 0x04}},
        {'Z', {0x1f, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1f}},
    };
    const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    const auto it = table.find(up);
    return it == table.end() ? nullptr : &it->second;
}

// ---- PNG plumbing ----

void put_u32_be(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

void write_chunk(std::ofstream& os, const char type[5], const std::string& data) {
    std::string head;
    put_u32_be(head, static_cast<std::uint32_t>(data.size()));
    os.write(head.data(), 4);
    std::string body(type, 4);
    body += data;
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(body.data()),
                           static_cast<uInt>(body.size()));
    std::string tail;
    put_u32_be(tail, static_cast<std::uint32_t>(crc));
    os.write(tail.data(), 4);
}

}  // namespace

Rgb class_color(int index) {
    static const std::array<Rgb, 10> palette = {{{31, 119, 180},
                                                 {255, 127, 14},
                                                 {44, 160, 44},
                                                 {214, 39, 40},
                                                 {148, 103, 189},
                                                 {140, 86, 75},
                                                 {227, 119, 194},
                                                 {127, 127, 127},
                                                 {188, 189, 34},
                                                 {23, 190, 207}}};
    if (index < 0) return {160, 160, 160};
    return palette[static_cast<std::size_t>(index) % palette.size()];
}

Canvas::Canvas(int width, int height, Rgb background) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw ConfigError("canvas dimensions must be positive");
    pixels_.resize(static_cast<std::size_t>(width) * height * 3);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) set_pixel(x, y, background);
}

void Canvas::set_pixel(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
    const std::size_t at = (static_cast<std::size_t>(y) * width_ + x) * 3;
    pixels_[at] = c.r;
    pixels_[at + 1] = c.g;
    pixels_[at + 2] = c.b;
}

void Canvas::fill_rect(int x0, int y0, int x1, int y1, Rgb c) {
    for (int y = std::max(0, y0); y <= std::min(height_ - 1, y1); ++y)
        for (int x = std::max(0, x0); x <= std::min(width_ - 1, x1); ++x) set_pixel(x, y, c);
}

void Canvas::draw_disc(int cx, int cy, int radius, Rgb c) {
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) set_pixel(cx + dx, cy + dy, c);
}

void Canvas::draw_text(int x, int y, const std::string& text, Rgb c, int scale) {
    int pen = x;
    for (char ch : text) {
        if (const Glyph* g = find_glyph(ch)) {
            for (int row = 0; row < 7; ++row)
                for (int col = 0; col < 5; ++col)
                    if ((*g)[static_cast<std::size_t>(row)] & (0x10 >> col))
                        for (int sy = 0; sy < scale; ++sy)
                            for (int sx = 0; sx < scale; ++sx)
                                set_pixel(pen + col * scale + sx, y + row * scale + sy, c);
        }
        pen += 6 * scale;
    }
}

void write_png(const std::filesystem::path& path, const Canvas& canvas,
               const std::map<std::string, std::string>& text_chunks) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open image for writing: " + path.string());
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    os.write(reinterpret_cast<const char*>(sig), 8);

    std::string ihdr;
    put_u32_be(ihdr, static_cast<std::uint32_t>(canvas.width()));
    put_u32_be(ihdr, static_cast<std::uint32_t>(canvas.height()));
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(2);   // truecolor
    ihdr.push_back(0);   // compression
    ihdr.push_back(0);   // filter
    ihdr.push_back(0);   // no interlace
    write_chunk(os, "IHDR", ihdr);

    for (const auto& [key, value] : text_chunks) {
        std::string data = key;
        data.push_back('\0');
        data += value;
        write_chunk(os, "tEXt", data);
    }

    // Raw scanlines, filter byte 0 per row.
    const std::size_t stride = static_cast<std::size_t>(canvas.width()) * 3;
    std::string raw;
    raw.reserve((stride + 1) * static_cast<std::size_t>(canvas.height()));
    for (int y = 0; y < canvas.height(); ++y) {
        raw.push_back('\0');
        raw.append(reinterpret_cast<const char*>(canvas.pixels().data() + y * stride), stride);
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::string idat(bound, '\0');
    if (compress2(reinterpret_cast<Bytef*>(idat.data()), &bound,
                  reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                  6) != Z_OK)
        throw NumericError("PNG compression failed");
    idat.resize(bound);
    write_chunk(os, "IDAT", idat);
    write_chunk(os, "IEND", "");
    if (!os) throw DataError("write failed for image: " + path.string());
}

int scatter_plot(const std::filesystem::path& png_path, const Eigen::MatrixXd& coords,
                 const std::vector<int>& labels, const std::string& title,
                 const std::map<std::string, std::string>& text_chunks) {
    if (coords.cols() != 2) throw DataError("scatter_plot expects N x 2 coordinates");
    if (static_cast<std::size_t>(coords.rows()) != labels.size())
        throw DataError("scatter_plot: coordinate/label size mismatch");

    const int plot = 640, margin = 40, legend_w = 150, title_h = 28;
    Canvas canvas(plot + 2 * margin + legend_w, plot + 2 * margin + title_h);
    canvas.draw_text(margin, 10, title, {0, 0, 0});

    const double x_min = coords.col(0).minCoeff(), x_max = coords.col(0).maxCoeff();
    const double y_min = coords.col(1).minCoeff(), y_max = coords.col(1).maxCoeff();
    const double x_span = std::max(x_max - x_min, 1e-12);
    const double y_span = std::max(y_max - y_min, 1e-12);

    std::set<int> distinct(labels.begin(), labels.end());
    std::map<int, int> color_of;
    for (int l : distinct) color_of[l] = static_cast<int>(color_of.size());

    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        const int x = margin + static_cast<int>((coords(i, 0) - x_min) / x_span * (plot - 1));
        const int y = title_h + margin +
                      static_cast<int>((1.0 - (coords(i, 1) - y_min) / y_span) * (plot - 1));
        canvas.draw_disc(x, y, 2, class_color(labels[i] < 0 ? -1 : color_of[labels[i]]));
    }

    int row = 0;
    for (int l : distinct) {
        const int lx = plot + 2 * margin + 10;
        const int ly = title_h + margin + row * 18;
        canvas.draw_disc(lx, ly + 3, 4, class_color(l < 0 ? -1 : color_of[l]));
        canvas.draw_text(lx + 12, ly, "class " + std::to_string(l), {0, 0, 0});
        ++row;
    }
    write_png(png_path, canvas, text_chunks);
    return static_cast<int>(distinct.size());
}

void montage_plot(const std::filesystem::path& png_path,
                  const std::vector<std::vector<const Eigen::MatrixXd*>>& rows,
                  const std::vector<std::string>& row_titles,
                  const std::map<std::string, std::string>& text_chunks) {
    if (rows.empty()) throw DataError("montage_plot: no rows");
    if (rows.size() != row_titles.size())
        throw DataError("montage_plot: row/title count mismatch");
    std::size_t max_panels = 0;
    for (const auto& r : rows) max_panels = std::max(max_panels, r.size());
    if (max_panels == 0) throw DataError("montage_plot: empty rows");

    const int panel = 140, pad = 8, label_w = 110;
    Canvas canvas(label_w + static_cast<int>(max_panels) * (panel + pad) + pad,
                  static_cast<int>(rows.size()) * (panel + pad) + pad);

    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int top = pad + static_cast<int>(r) * (panel + pad);
        canvas.draw_text(pad, top + panel / 2 - 4, row_titles[r], {0, 0, 0});
        for (std::size_t p = 0; p < rows[r].size(); ++p) {
            const Eigen::MatrixXd& pts = *rows[r][p];
            const int left = label_w + pad + static_cast<int>(p) * (panel + pad);
            canvas.fill_rect(left, top, left + panel - 1, top + panel - 1, {245, 245, 245});
            if (pts.rows() == 0) continue;
            // Orthographic front view: x across, z up.
            const double x_min = pts.col(0).minCoeff(), x_max = pts.col(0).maxCoeff();
            const double z_min = pts.col(2).minCoeff(), z_max = pts.col(2).maxCoeff();
            const double span = std::max({x_max - x_min, z_max - z_min, 1e-12});
            const double x_mid = 0.5 * (x_min + x_max), z_mid = 0.5 * (z_min + z_max);
            for (Eigen::Index i = 0; i < pts.rows(); ++i) {
                const double u = (pts(i, 0) - x_mid) / span + 0.5;
                const double v = 0.5 - (pts(i, 2) - z_mid) / span;
                canvas.draw_disc(left + 4 + static_cast<int>(u * (panel - 9)),
                                 top + 4 + static_cast<int>(v * (panel - 9)), 1,
                                 class_color(static_cast<int>(r)));
            }
        }
    }
    write_png(png_path, canvas, text_chunks);
}

}  // namespace pcfl::eval

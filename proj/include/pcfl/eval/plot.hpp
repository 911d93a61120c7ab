#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pcfl::eval {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

/// Categorical palette (repeats after 10 entries).
Rgb class_color(int index);

/// In-memory RGB raster with minimal drawing primitives.
class Canvas {
public:
    Canvas(int width, int height, Rgb background = {255, 255, 255});
    int width() const { return width_; }
    int height() const { return height_; }

    void set_pixel(int x, int y, Rgb c);
    void fill_rect(int x0, int y0, int x1, int y1, Rgb c);
    void draw_disc(int cx, int cy, int radius, Rgb c);
    /// 5x7 bitmap font (ASCII 32..126, lowercase folded to uppercase).
    void draw_text(int x, int y, const std::string& text, Rgb c, int scale = 1);

    const std::vector<std::uint8_t>& pixels() const { return pixels_; }

private:
    int width_, height_;
    std::vector<std::uint8_t> pixels_;  // RGB8, row-major
};

/// Writes the canvas as an 8-bit RGB PNG; `text_chunks` become tEXt entries
/// (used to embed the config hash in every plot).
void write_png(const std::filesystem::path& path, const Canvas& canvas,
               const std::map<std::string, std::string>& text_chunks = {});

/// Scatter of 2-D coordinates colored by label, with a legend naming each
/// distinct label. Returns the legend entry count.
int scatter_plot(const std::filesystem::path& png_path, const Eigen::MatrixXd& coords,
                 const std::vector<int>& labels, const std::string& title,
                 const std::map<std::string, std::string>& text_chunks = {});

/// One row per cluster: each panel is an orthographic (x, z) scatter of one
/// cloud; panel order follows `rows` (e.g. nearest_to_centroid output).
void montage_plot(const std::filesystem::path& png_path,
                  const std::vector<std::vector<const Eigen::MatrixXd*>>& rows,
                  const std::vector<std::string>& row_titles,
                  const std::map<std::string, std::string>& text_chunks = {});

}  // namespace pcfl::eval

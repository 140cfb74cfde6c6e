#include "rankcount/image.hpp"

#include <cctype>
#include <fstream>
#include <string>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"

namespace rankcount {

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, fill) {
  if (width <= 0 || height <= 0) throw DomainError("image dimensions must be positive");
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::string data = "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  data.append(image.pixels().begin(), image.pixels().end());
  csv::write_text(path, data);
}

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(const std::string& data, std::size_t& pos) {
  while (pos < data.size()) {
    if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
  return data.substr(start, pos - start);
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  const std::string data = csv::read_text(path);
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) { return IoError(path.string() + ": " + why); };
  if (next_token(data, pos) != "P5") throw fail("not a binary PGM (P5)");
  long long w = 0;
  long long h = 0;
  long long maxval = 0;
  try {
    w = csv::parse_int(next_token(data, pos));
    h = csv::parse_int(next_token(data, pos));
    maxval = csv::parse_int(next_token(data, pos));
  } catch (const IoError& e) {
    throw fail(std::string("bad header: ") + e.what());
  }
  if (maxval != 255) throw fail("only maxval 255 is supported");
  if (w <= 0 || h <= 0 || w > 1 << 16 || h > 1 << 16) throw fail("bad dimensions");
  ++pos;  // single whitespace byte after maxval
  const std::size_t n = static_cast<std::size_t>(w * h);
  if (data.size() < pos + n) throw fail("truncated pixel data");
  GrayImage image(static_cast<int>(w), static_cast<int>(h));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      image.at(x, y) = static_cast<std::uint8_t>(data[pos + static_cast<std::size_t>(y) * w + x]);
  return image;
}

}  // namespace rankcount

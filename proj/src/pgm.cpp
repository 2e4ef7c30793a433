#include "motgv/pgm.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "motgv/grid_ops.hpp"

namespace motgv {

namespace {

struct Scanner {
  const std::string& buf;
  std::size_t pos = 0;

  void skip() {
    while (pos < buf.size()) {
      const char c = buf[pos];
      if (c == '#') {
        while (pos < buf.size() && buf[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos;
      } else {
        break;
      }
    }
  }

  long next_int(const char* what) {
    skip();
    if (pos >= buf.size())
      throw InputError(std::string("pgm: unexpected end of file reading ") + what +
                       " at byte offset " + std::to_string(pos));
    std::size_t start = pos;
    long v = 0;
    bool any = false;
    while (pos < buf.size() && buf[pos] >= '0' && buf[pos] <= '9') {
      v = v * 10 + (buf[pos] - '0');
      ++pos;
      any = true;
      if (v > 1000000000) break;
    }
    if (!any)
      throw InputError(std::string("pgm: malformed ") + what + " at byte offset " +
                       std::to_string(start));
    return v;
  }
};

}  // namespace

PgmImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("pgm: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string buf = ss.str();
  if (buf.size() < 2 || buf[0] != 'P' || (buf[1] != '2' && buf[1] != '5'))
    throw InputError("pgm: bad magic in " + path + " (expected P2 or P5)");
  PgmImage img;
  img.binary = buf[1] == '5';
  Scanner sc{buf, 2};
  const long w = sc.next_int("width");
  const long h = sc.next_int("height");
  const long maxval = sc.next_int("maxval");
  if (w <= 0 || h <= 0) throw InputError("pgm: non-positive dimensions in " + path);
  if (maxval <= 0 || maxval > 65535) throw InputError("pgm: maxval out of range in " + path);
  img.maxval = static_cast<int>(maxval);
  img.field = GridField(static_cast<int>(w), static_cast<int>(h), 1);
  if (img.binary) {
    ++sc.pos;  // single whitespace after maxval
    const int bytes = maxval > 255 ? 2 : 1;
    const std::size_t need = static_cast<std::size_t>(w) * h * bytes;
    if (buf.size() - sc.pos < need)
      throw InputError("pgm: truncated pixel data at byte offset " + std::to_string(buf.size()));
    for (long j = 0; j < h; ++j)
      for (long i = 0; i < w; ++i) {
        unsigned v = static_cast<unsigned char>(buf[sc.pos++]);
        if (bytes == 2) v = (v << 8) | static_cast<unsigned char>(buf[sc.pos++]);
        img.field.at(static_cast<int>(i), static_cast<int>(j)) = double(v) / maxval;
      }
  } else {
    for (long j = 0; j < h; ++j)
      for (long i = 0; i < w; ++i) {
        const long v = sc.next_int("pixel");
        if (v > maxval)
          throw InputError("pgm: pixel exceeds maxval at byte offset " + std::to_string(sc.pos));
        img.field.at(static_cast<int>(i), static_cast<int>(j)) = double(v) / maxval;
      }
  }
  return img;
}

void save_pgm(const std::string& path, const PgmImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("pgm: cannot write " + path);
  const GridField& f = img.field;
  out << (img.binary ? "P5" : "P2") << '\n' << f.width() << ' ' << f.height() << '\n'
      << img.maxval << '\n';
  auto quant = [&](double v) {
    long q = std::lround(v * img.maxval);
    if (q < 0) q = 0;
    if (q > img.maxval) q = img.maxval;
    return q;
  };
  if (img.binary) {
    const int bytes = img.maxval > 255 ? 2 : 1;
    for (int j = 0; j < f.height(); ++j)
      for (int i = 0; i < f.width(); ++i) {
        const long q = quant(f.at(i, j));
        if (bytes == 2) out.put(static_cast<char>((q >> 8) & 0xff));
        out.put(static_cast<char>(q & 0xff));
      }
  } else {
    for (int j = 0; j < f.height(); ++j) {
      for (int i = 0; i < f.width(); ++i) {
        if (i) out << ' ';
        out << quant(f.at(i, j));
      }
      out << '\n';
    }
  }
}

void save_pgm(const std::string& path, const GridField& f, int maxval, bool binary) {
  save_pgm(path, PgmImage{f, maxval, binary});
}

ExponentMap make_pmap(const GridField& image, double k, double sigma) {
  if (image.channels() != 1) throw InputError("make_pmap: expects a scalar image");
  if (!(k >= 0.0) || !(sigma > 0.0)) throw InputError("make_pmap: bad parameters");
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kern(2 * r + 1);
  for (int t = -r; t <= r; ++t) kern[t + r] = std::exp(-0.5 * t * t / (sigma * sigma));

  auto blur_axis = [&](const GridField& src, bool horizontal) {
    GridField dst(src.width(), src.height(), 1, src.h());
    for (int j = 0; j < src.height(); ++j)
      for (int i = 0; i < src.width(); ++i) {
        double s = 0.0, wsum = 0.0;
        for (int t = -r; t <= r; ++t) {
          const int ii = horizontal ? i + t : i;
          const int jj = horizontal ? j : j + t;
          if (ii < 0 || ii >= src.width() || jj < 0 || jj >= src.height()) continue;
          s += kern[t + r] * src.at(ii, jj);
          wsum += kern[t + r];
        }
        dst.at(i, j) = s / wsum;
      }
    return dst;
  };
  const GridField smooth = blur_axis(blur_axis(image, true), false);
  const GridField g = grad(smooth);

  ExponentMap m(image.width(), image.height(), 2.0);
  for (int j = 0; j < image.height(); ++j)
    for (int i = 0; i < image.width(); ++i) {
      const std::size_t c = static_cast<std::size_t>(j) * image.width() + i;
      const double mag2 = g.magnitude(c) * g.magnitude(c);
      double p = 1.0 + 1.0 / (1.0 + k * mag2);
      if (p < 1.0) p = 1.0;
      if (p > 2.0) p = 2.0;
      m.set(i, j, p);
    }
  return m;
}

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open " + path);
  std::map<std::string, std::string> cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::size_t eq = line.find('=');
    auto trim = [](std::string s) {
      const char* ws = " \t\r";
      s.erase(0, s.find_first_not_of(ws));
      const std::size_t last = s.find_last_not_of(ws);
      s.erase(last == std::string::npos ? 0 : last + 1);
      return s;
    };
    if (eq == std::string::npos) {
      if (!trim(line).empty())
        throw InputError("config: line " + std::to_string(lineno) + " is not key=value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InputError("config: empty key at line " + std::to_string(lineno));
    cfg[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

}  // namespace motgv

#pragma once

#include "gpsp/block_linalg.hpp"
#include "gpsp/parallel.hpp"
#include "gpsp/pursuit.hpp"
#include "gpsp/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace gpsp::face {

struct FaceImage {
  int subject = 0;
  Vector pixels;  // intensities in [0, 1]
};

struct FaceDataset {
  std::vector<FaceImage> images;
  int skipped = 0;  // unreadable, truncated, or mismatched files

  std::vector<int> subjects() const {
    std::vector<int> ids;
    for (const auto& im : images) ids.push_back(im.subject);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  }

  int pixel_dim() const {
    return images.empty() ? 0 : static_cast<int>(images.front().pixels.size());
  }
};

namespace detail {

using gpsp::detail::require;

inline bool read_pgm(const std::filesystem::path& path, int& width, int& height,
                     std::vector<unsigned char>& payload) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::string magic;
  in >> magic;
  if (magic != "P5") return false;
  auto next_int = [&](int& out) -> bool {
    // Skips whitespace and '#' comment lines.
    while (true) {
      const int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    return static_cast<bool>(in >> out);
  };
  int maxval = 0;
  if (!next_int(width) || !next_int(height) || !next_int(maxval)) return false;
  if (width <= 0 || height <= 0 || maxval != 255) return false;
  in.get();  // single whitespace before the payload
  payload.resize(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  return in.gcount() == static_cast<std::streamsize>(payload.size());
}

/// Subject number from names like yaleB07_P00A-005E+10.pgm; -1 if absent.
inline int subject_from_name(const std::string& name) {
  const auto pos = name.find("yaleB");
  if (pos == std::string::npos) return -1;
  std::size_t i = pos + 5;
  int id = 0;
  bool any = false;
  while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i]))) {
    id = id * 10 + (name[i] - '0');
    ++i;
    any = true;
  }
  return any ? id : -1;
}

}  // namespace detail

/// Loads every *.pgm under root (recursively), ordered by path. Subject ids
/// come from the yaleB<NN> filename prefix. The first readable image fixes
/// the expected dimensions; corrupt, truncated, unparsable, or mismatched
/// files are skipped and counted.
inline FaceDataset load_yaleb(const std::string& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root))
    throw std::runtime_error("load_yaleb: no such directory: " + root);

  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file() && entry.path().extension() == ".pgm")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());

  FaceDataset ds;
  int expected_w = -1, expected_h = -1;
  for (const auto& p : paths) {
    const int subject = detail::subject_from_name(p.filename().string());
    int w = 0, h = 0;
    std::vector<unsigned char> buf;
    if (subject < 0 || !detail::read_pgm(p, w, h, buf)) {
      ++ds.skipped;
      continue;
    }
    if (expected_w < 0) {
      expected_w = w;
      expected_h = h;
    } else if (w != expected_w || h != expected_h) {
      ++ds.skipped;
      continue;
    }
    FaceImage im;
    im.subject = subject;
    im.pixels.resize(static_cast<Eigen::Index>(buf.size()));
    for (std::size_t i = 0; i < buf.size(); ++i)
      im.pixels(static_cast<Eigen::Index>(i)) = buf[i] / 255.0;
    ds.images.push_back(std::move(im));
  }
  if (ds.images.empty()) throw std::runtime_error("load_yaleb: no readable images");
  return ds;
}

inline void write_pgm(const std::filesystem::path& path, int width, int height,
                      const Vector& pixels01) {
  detail::require(pixels01.size() == static_cast<Eigen::Index>(width) * height,
                  "write_pgm: size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path.string());
  out << "P5\n" << width << " " << height << "\n255\n";
  for (Eigen::Index i = 0; i < pixels01.size(); ++i) {
    const double v = std::clamp(pixels01(i), 0.0, 1.0);
    out.put(static_cast<char>(std::lround(v * 255.0)));
  }
}

struct SplitResult {
  FaceDataset train;
  FaceDataset test;
};

/// Per-subject uniform sample of m_train images (without replacement) into
/// the training set; the rest become test data. Deterministic per seed.
inline SplitResult split_train_test(const FaceDataset& ds, int m_train, std::uint64_t seed) {
  detail::require(m_train >= 1, "split_train_test: m_train must be >= 1");
  std::map<int, std::vector<std::size_t>> by_subject;
  for (std::size_t i = 0; i < ds.images.size(); ++i)
    by_subject[ds.images[i].subject].push_back(i);

  SplitResult split;
  for (auto& [subject, idx] : by_subject) {
    detail::require(static_cast<int>(idx.size()) >= m_train,
                    "split_train_test: subject has fewer images than m_train");
    StreamRng rng(seed, static_cast<std::uint64_t>(subject), 0x73706c6974ULL);
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
      const std::size_t j = i + rng.uniform_int(idx.size() - i);
      std::swap(idx[i], idx[j]);
    }
    for (std::size_t i = 0; i < idx.size(); ++i) {
      auto& target = i < static_cast<std::size_t>(m_train) ? split.train : split.test;
      target.images.push_back(ds.images[idx[i]]);
    }
  }
  return split;
}

enum class ReductionMethod { kPca, kRandomProjection, kDownsample };

inline const char* reduction_name(ReductionMethod m) {
  switch (m) {
    case ReductionMethod::kPca: return "pca";
    case ReductionMethod::kRandomProjection: return "randproj";
    case ReductionMethod::kDownsample: return "downsample";
  }
  return "?";
}

struct ReductionSpec {
  ReductionMethod method = ReductionMethod::kPca;
  int target_dim = 132;
  std::uint64_t seed = 0;
};

struct ReducedData {
  Matrix train;                    // target_dim x n_train
  std::vector<int> train_subjects;
  Matrix test;                     // target_dim x n_test
  std::vector<int> test_subjects;
  int warnings = 0;                // e.g. rank-starved principal components
};

namespace detail {

inline Matrix stack_columns(const FaceDataset& ds) {
  require(!ds.images.empty(), "reduce: empty dataset");
  Matrix m(ds.images.front().pixels.size(), static_cast<Eigen::Index>(ds.images.size()));
  for (std::size_t i = 0; i < ds.images.size(); ++i)
    m.col(static_cast<Eigen::Index>(i)) = ds.images[i].pixels;
  return m;
}

}  // namespace detail

/// Dimension reduction fitted on training data only (PCA) or drawn once from
/// the seed and applied to both sets (random projection, downsampling).
inline ReducedData reduce(const FaceDataset& train, const FaceDataset& test,
                          const ReductionSpec& spec) {
  detail::require(spec.target_dim >= 1, "reduce: target_dim must be >= 1");
  const Matrix train_cols = detail::stack_columns(train);
  detail::require(spec.target_dim <= train_cols.rows(),
                  "reduce: target_dim exceeds pixel dimension");

  ReducedData out;
  for (const auto& im : train.images) out.train_subjects.push_back(im.subject);
  for (const auto& im : test.images) out.test_subjects.push_back(im.subject);

  Matrix test_cols;
  if (!test.images.empty()) test_cols = detail::stack_columns(test);
  const int d = spec.target_dim;

  switch (spec.method) {
    case ReductionMethod::kPca: {
      const Vector mean = train_cols.rowwise().mean();
      const Matrix centered = train_cols.colwise() - mean;
      // Principal directions from the thin SVD of the centered training set.
      Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU);
      const auto& sv = svd.singularValues();
      int rank = 0;
      const double tol = std::max(centered.rows(), centered.cols()) *
                         std::numeric_limits<double>::epsilon() * (sv.size() ? sv(0) : 0.0);
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
      const int used = std::min(d, rank);
      if (used < d) ++out.warnings;  // zero-pad the missing directions
      Matrix basis = Matrix::Zero(train_cols.rows(), d);
      basis.leftCols(used) = svd.matrixU().leftCols(used);
      out.train = basis.transpose() * centered;
      if (test_cols.size() > 0)
        out.test = basis.transpose() * (test_cols.colwise() - mean);
      break;
    }
    case ReductionMethod::kRandomProjection: {
      StreamRng rng(spec.seed, 0, 0x72616e64ULL);
      Matrix proj(d, train_cols.rows());
      const double stddev = 1.0 / std::sqrt(static_cast<double>(d));
      for (Eigen::Index i = 0; i < proj.rows(); ++i)
        for (Eigen::Index j = 0; j < proj.cols(); ++j) proj(i, j) = rng.normal(0.0, stddev);
      out.train = proj * train_cols;
      if (test_cols.size() > 0) out.test = proj * test_cols;
      break;
    }
    case ReductionMethod::kDownsample: {
      StreamRng rng(spec.seed, 0, 0x646f776eULL);
      std::vector<Eigen::Index> idx(static_cast<std::size_t>(train_cols.rows()));
      std::iota(idx.begin(), idx.end(), 0);
      for (int i = 0; i < d; ++i) {
        const std::size_t j = static_cast<std::size_t>(i) +
                              rng.uniform_int(idx.size() - static_cast<std::size_t>(i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
      }
      out.train.resize(d, train_cols.cols());
      if (test_cols.size() > 0) out.test.resize(d, test_cols.cols());
      for (int i = 0; i < d; ++i) {
        out.train.row(i) = train_cols.row(idx[static_cast<std::size_t>(i)]);
        if (test_cols.size() > 0) out.test.row(i) = test_cols.row(idx[static_cast<std::size_t>(i)]);
      }
      break;
    }
  }
  return out;
}

struct FaceDictionary {
  BlockMatrix a;               // one normalized block of m_train columns per subject
  std::vector<int> block_subject;
};

/// Groups the reduced training columns by subject (ascending id); every
/// subject must contribute exactly m_train columns.
inline FaceDictionary build_dictionary(const ReducedData& data, int m_train) {
  std::map<int, std::vector<Eigen::Index>> by_subject;
  for (std::size_t i = 0; i < data.train_subjects.size(); ++i)
    by_subject[data.train_subjects[i]].push_back(static_cast<Eigen::Index>(i));

  const int g_count = static_cast<int>(by_subject.size());
  detail::require(g_count >= 1, "build_dictionary: no subjects");
  Matrix m(data.train.rows(), static_cast<Eigen::Index>(g_count) * m_train);
  std::vector<int> block_subject;
  int g = 0;
  for (const auto& [subject, cols] : by_subject) {
    detail::require(static_cast<int>(cols.size()) == m_train,
                    "build_dictionary: uneven training counts");
    for (int j = 0; j < m_train; ++j)
      m.col(static_cast<Eigen::Index>(g) * m_train + j) = data.train.col(cols[static_cast<std::size_t>(j)]);
    block_subject.push_back(subject);
    ++g;
  }
  auto [normalized, scales] = column_normalize(BlockMatrix(std::move(m), g_count, m_train));
  return {std::move(normalized), std::move(block_subject)};
}

/// Sparsity-one pursuit; returns the selected block's subject id. The test
/// vector is used as-is (no normalization).
inline int classify_face(const FaceDictionary& dict, const Vector& b,
                         const CriteriaSpec& algorithm, int max_iter = 50) {
  const PursuitResult r = generic_pursuit(dict.a, b, 1, algorithm, max_iter);
  detail::require(!r.outcome.support.empty(), "classify_face: empty selection");
  return dict.block_subject[static_cast<std::size_t>(r.outcome.support[0])];
}

/// Fraction of test columns classified into their true subject.
inline double evaluate_accuracy(const ReducedData& data, int m_train,
                                const CriteriaSpec& algorithm, int jobs = 1) {
  const FaceDictionary dict = build_dictionary(data, m_train);
  const std::size_t n = data.test_subjects.size();
  detail::require(n > 0, "evaluate_accuracy: empty test set");
  std::vector<int> correct(n, 0);
  parallel_for(n, jobs, [&](std::size_t i) {
    const int predicted = classify_face(dict, data.test.col(static_cast<Eigen::Index>(i)),
                                        algorithm);
    correct[i] = predicted == data.test_subjects[i] ? 1 : 0;
  });
  int sum = 0;
  for (int c : correct) sum += c;
  return static_cast<double>(sum) / static_cast<double>(n);
}

/// Synthetic dataset whose subjects occupy disjoint pixel bands: block
/// subspaces are exactly orthogonal, so every algorithm classifies perfectly.
/// Pixel values stay in [0.4, 1] on the active band so 8-bit quantization
/// preserves the structure.
inline FaceDataset make_orthogonal_fixture(int n_subjects, int images_per_subject,
                                           int band_pixels, std::uint64_t seed) {
  FaceDataset ds;
  const int dim = n_subjects * band_pixels;
  for (int s = 0; s < n_subjects; ++s) {
    StreamRng rng(seed, static_cast<std::uint64_t>(s), 0x66697874ULL);
    for (int i = 0; i < images_per_subject; ++i) {
      FaceImage im;
      im.subject = s + 1;  // match the 1-based yaleB numbering
      im.pixels = Vector::Zero(dim);
      for (int p = 0; p < band_pixels; ++p)
        im.pixels(s * band_pixels + p) = 0.4 + 0.6 * rng.uniform();
      ds.images.push_back(std::move(im));
    }
  }
  return ds;
}

/// Writes the fixture as PGM files named like the real dataset.
inline void write_fixture_pgms(const std::filesystem::path& dir, int n_subjects,
                               int images_per_subject, int band_pixels,
                               std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const FaceDataset ds = make_orthogonal_fixture(n_subjects, images_per_subject,
                                                 band_pixels, seed);
  std::map<int, int> counter;
  for (const auto& im : ds.images) {
    const int n = counter[im.subject]++;
    char name[64];
    std::snprintf(name, sizeof(name), "yaleB%02d_fixture%02d.pgm", im.subject, n);
    write_pgm(dir / name, static_cast<int>(im.pixels.size()), 1, im.pixels);
  }
}

}  // namespace gpsp::face

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace krongraph {

// Complete 4-index replicate array indexed (speaker, word, trial, time).
// Values are pitch measurements in Hz.  Axis labels keep file order;
// trial and time axes are 1-based contiguous integers in the CSV and
// 0-based here.
struct ReplicateTensor {
  int n_speakers = 0;
  int n_words = 0;
  int n_trials = 0;
  int n_times = 0;
  std::vector<std::string> speaker_ids;
  std::vector<std::string> word_ids;
  std::vector<double> values;  // ((s * n_words + w) * n_trials + r) * n_times + t

  double at(int s, int w, int r, int t) const {
    return values[static_cast<size_t>(((s * n_words + w) * n_trials + r)) * n_times + t];
  }
  double& at(int s, int w, int r, int t) {
    return values[static_cast<size_t>(((s * n_words + w) * n_trials + r)) * n_times + t];
  }

  // One (speaker, trial) slice as an n_words x n_times matrix.
  Eigen::MatrixXd slice(int speaker, int trial) const;
};

// Trial-centered tensor: each cell is the original value minus the
// per-(speaker, word, time) mean over trials.
struct ResidualTensor : ReplicateTensor {};

enum class VowelLength { long_vowel, short_vowel };
enum class ConsonantClass { labial, alveolar, nasal, fricative };

std::string to_string(VowelLength v);
std::string to_string(ConsonantClass c);

struct WordRecord {
  std::string word;
  std::string vowel;
  VowelLength vowel_length = VowelLength::short_vowel;
  std::string onset;
  std::string coda_first;  // may be empty
  std::string coda_last;   // may be empty
  ConsonantClass consonant_class = ConsonantClass::labial;
  // Any columns beyond the required seven, e.g. merged-onset groupings.
  std::map<std::string, std::string> extra;
};

struct WordMetadata {
  std::vector<WordRecord> records;
  std::vector<std::string> extra_columns;

  const WordRecord* find(const std::string& word) const;

  // Attribute value by column name; covers the built-in columns plus any
  // extra column.  Throws MissingAttribute for unknown names and
  // MissingWord for unknown words.
  std::string attribute(const std::string& word, const std::string& name) const;
  bool has_attribute(const std::string& name) const;
};

// Column mapping for the long-format tensor CSV.
struct TensorSchema {
  std::string speaker = "speaker";
  std::string word = "word";
  std::string trial = "trial";
  std::string time = "time";
  std::string value = "value";
};

// Long format: header speaker,word,trial,time,value with trial and time
// 1-based; rows must cover the full Cartesian grid.
ReplicateTensor load_tensor(const std::filesystem::path& path,
                            const TensorSchema& schema = {});
ReplicateTensor read_tensor_csv(std::istream& in, const std::string& where,
                                const TensorSchema& schema = {});

// Wide-format adapter: header speaker,word,trial,<one column per time
// point>; converts to long form and reuses the same grid validation.
ReplicateTensor load_tensor_wide(const std::filesystem::path& path);

void write_tensor_csv(const ReplicateTensor& tensor, std::ostream& out);

// Metadata CSV with required columns word, vowel, vowel_length, onset,
// coda_first, coda_last, consonant_class (any order); additional columns
// are kept as extra attributes.
WordMetadata load_metadata(const std::filesystem::path& path);
WordMetadata read_metadata_csv(std::istream& in, const std::string& where);
void write_metadata_csv(const WordMetadata& metadata, std::ostream& out);

// Every tensor word must have a metadata row (MissingWord otherwise);
// metadata rows for unknown words are returned as warnings.
std::vector<std::string> check_metadata(const WordMetadata& metadata,
                                        const ReplicateTensor& tensor);

// Entrywise mean over the trial axis for one speaker, n_words x n_times.
Eigen::MatrixXd trial_mean(const ReplicateTensor& tensor, int speaker);

ResidualTensor residualize(const ReplicateTensor& tensor);

// Keeps words whose `attribute` value is in `allowed`; original word order
// is preserved.  Fewer than two selected words is an error.
struct WordFilter {
  std::string attribute;
  std::set<std::string> allowed;

  // "vowel_length=long" or "consonant_class=labial,alveolar".
  static WordFilter parse(const std::string& text);
};

ResidualTensor subset_words(const ResidualTensor& tensor, const WordMetadata& metadata,
                            const WordFilter& filter);

}  // namespace krongraph

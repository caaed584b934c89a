#include "krongraph/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "krongraph/csv.hpp"
#include "krongraph/errors.hpp"

namespace krongraph {

namespace {

std::ifstream open_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("MissingFile", "cannot open " + path.string());
  }
  return in;
}

int find_column(const std::vector<std::string>& header, const std::string& name,
                const std::string& where) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw ValidationError("SchemaMismatch",
                          where + " is missing required column '" + name + "'");
  }
  return static_cast<int>(it - header.begin());
}

struct LongRow {
  int speaker, word, trial, time;  // 0-based indices
  double value;
};

// Shared grid builder for the long and wide readers.  Trials and times are
// already 0-based here; labels keep first-appearance order.
ReplicateTensor build_tensor(std::vector<std::string> speaker_ids,
                             std::vector<std::string> word_ids, int n_trials,
                             int n_times, const std::vector<LongRow>& rows) {
  ReplicateTensor t;
  t.n_speakers = static_cast<int>(speaker_ids.size());
  t.n_words = static_cast<int>(word_ids.size());
  t.n_trials = n_trials;
  t.n_times = n_times;
  t.speaker_ids = std::move(speaker_ids);
  t.word_ids = std::move(word_ids);
  const size_t total = static_cast<size_t>(t.n_speakers) * t.n_words * t.n_trials * t.n_times;
  t.values.assign(total, 0.0);
  std::vector<char> seen(total, 0);

  for (const auto& row : rows) {
    const size_t idx =
        (static_cast<size_t>((row.speaker * t.n_words + row.word) * t.n_trials + row.trial)) *
            t.n_times + row.time;
    if (seen[idx]) {
      throw ValidationError(
          "DuplicateCell", "duplicate row for (speaker=" + t.speaker_ids[row.speaker] +
                               ", word=" + t.word_ids[row.word] +
                               ", trial=" + std::to_string(row.trial + 1) +
                               ", time=" + std::to_string(row.time + 1) + ")");
    }
    seen[idx] = 1;
    t.values[idx] = row.value;
  }

  // Completeness.  A (speaker, word, trial) block whose present time
  // indices form a strict prefix 1..k of 1..n_times reads as a ragged time
  // axis; any other gap is reported as the first missing cell.
  for (int s = 0; s < t.n_speakers; ++s) {
    for (int w = 0; w < t.n_words; ++w) {
      for (int r = 0; r < t.n_trials; ++r) {
        int present = 0;
        int first_missing = -1;
        bool prefix = true;
        for (int ti = 0; ti < t.n_times; ++ti) {
          const size_t idx =
              (static_cast<size_t>((s * t.n_words + w) * t.n_trials + r)) * t.n_times + ti;
          if (seen[idx]) {
            ++present;
            if (first_missing >= 0) prefix = false;
          } else if (first_missing < 0) {
            first_missing = ti;
          }
        }
        if (present == t.n_times) continue;
        const std::string cell = "(speaker=" + t.speaker_ids[s] + ", word=" + t.word_ids[w] +
                                 ", trial=" + std::to_string(r + 1);
        if (present > 0 && prefix) {
          throw ValidationError("RaggedTimeAxis",
                                cell + ") stops at time " + std::to_string(present) +
                                    " of " + std::to_string(t.n_times));
        }
        throw ValidationError("MissingCell", cell + ", time=" +
                                                 std::to_string(first_missing + 1) +
                                                 ") is absent");
      }
    }
  }
  return t;
}

}  // namespace

Eigen::MatrixXd ReplicateTensor::slice(int speaker, int trial) const {
  Eigen::MatrixXd m(n_words, n_times);
  for (int w = 0; w < n_words; ++w)
    for (int t = 0; t < n_times; ++t) m(w, t) = at(speaker, w, trial, t);
  return m;
}

std::string to_string(VowelLength v) {
  return v == VowelLength::long_vowel ? "long" : "short";
}

std::string to_string(ConsonantClass c) {
  switch (c) {
    case ConsonantClass::labial: return "labial";
    case ConsonantClass::alveolar: return "alveolar";
    case ConsonantClass::nasal: return "nasal";
    case ConsonantClass::fricative: return "fricative";
  }
  return "labial";
}

ReplicateTensor read_tensor_csv(std::istream& in, const std::string& where,
                                const TensorSchema& schema) {
  auto raw = csv::read_rows(in);
  if (raw.empty()) {
    throw ValidationError("SchemaMismatch", where + " is empty");
  }
  const auto& header = raw.front();
  const int c_speaker = find_column(header, schema.speaker, where);
  const int c_word = find_column(header, schema.word, where);
  const int c_trial = find_column(header, schema.trial, where);
  const int c_time = find_column(header, schema.time, where);
  const int c_value = find_column(header, schema.value, where);

  std::vector<std::string> speakers, words;
  std::unordered_map<std::string, int> speaker_index, word_index;
  std::vector<LongRow> rows;
  rows.reserve(raw.size() - 1);
  int n_trials = 0, n_times = 0;

  for (size_t i = 1; i < raw.size(); ++i) {
    const auto& fields = raw[i];
    const std::string at_line = where + " line " + std::to_string(i + 1);
    if (fields.size() < header.size()) {
      throw ValidationError("SchemaMismatch", at_line + " has too few fields");
    }
    LongRow row;
    auto sit = speaker_index.find(fields[c_speaker]);
    if (sit == speaker_index.end()) {
      sit = speaker_index.emplace(fields[c_speaker], static_cast<int>(speakers.size())).first;
      speakers.push_back(fields[c_speaker]);
    }
    row.speaker = sit->second;
    auto wit = word_index.find(fields[c_word]);
    if (wit == word_index.end()) {
      wit = word_index.emplace(fields[c_word], static_cast<int>(words.size())).first;
      words.push_back(fields[c_word]);
    }
    row.word = wit->second;
    const long trial = csv::parse_long(fields[c_trial], at_line + ", column trial");
    const long time = csv::parse_long(fields[c_time], at_line + ", column time");
    if (trial < 1 || time < 1) {
      throw ValidationError("SchemaMismatch",
                            at_line + ": trial and time must be positive 1-based indices");
    }
    row.trial = static_cast<int>(trial - 1);
    row.time = static_cast<int>(time - 1);
    row.value = csv::parse_double(fields[c_value], at_line + ", column value");
    n_trials = std::max(n_trials, static_cast<int>(trial));
    n_times = std::max(n_times, static_cast<int>(time));
    rows.push_back(row);
  }
  if (rows.empty()) {
    throw ValidationError("SchemaMismatch", where + " has a header but no rows");
  }
  return build_tensor(std::move(speakers), std::move(words), n_trials, n_times, rows);
}

ReplicateTensor load_tensor(const std::filesystem::path& path, const TensorSchema& schema) {
  auto in = open_file(path);
  return read_tensor_csv(in, path.filename().string(), schema);
}

ReplicateTensor load_tensor_wide(const std::filesystem::path& path) {
  auto in = open_file(path);
  const std::string where = path.filename().string();
  auto raw = csv::read_rows(in);
  if (raw.empty()) throw ValidationError("SchemaMismatch", where + " is empty");
  const auto& header = raw.front();
  const int c_speaker = find_column(header, "speaker", where);
  const int c_word = find_column(header, "word", where);
  const int c_trial = find_column(header, "trial", where);
  std::vector<int> value_cols;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    if (c != c_speaker && c != c_word && c != c_trial) value_cols.push_back(c);
  }
  if (value_cols.empty()) {
    throw ValidationError("SchemaMismatch", where + " has no time columns");
  }

  std::vector<std::string> speakers, words;
  std::unordered_map<std::string, int> speaker_index, word_index;
  std::vector<LongRow> rows;
  for (size_t i = 1; i < raw.size(); ++i) {
    const auto& fields = raw[i];
    const std::string at_line = where + " line " + std::to_string(i + 1);
    if (fields.size() < header.size()) {
      throw ValidationError("SchemaMismatch", at_line + " has too few fields");
    }
    auto sit = speaker_index.find(fields[c_speaker]);
    if (sit == speaker_index.end()) {
      sit = speaker_index.emplace(fields[c_speaker], static_cast<int>(speakers.size())).first;
      speakers.push_back(fields[c_speaker]);
    }
    auto wit = word_index.find(fields[c_word]);
    if (wit == word_index.end()) {
      wit = word_index.emplace(fields[c_word], static_cast<int>(words.size())).first;
      words.push_back(fields[c_word]);
    }
    const long trial = csv::parse_long(fields[c_trial], at_line + ", column trial");
    if (trial < 1) {
      throw ValidationError("SchemaMismatch", at_line + ": trial must be a positive index");
    }
    for (size_t t = 0; t < value_cols.size(); ++t) {
      LongRow row;
      row.speaker = sit->second;
      row.word = wit->second;
      row.trial = static_cast<int>(trial - 1);
      row.time = static_cast<int>(t);
      row.value = csv::parse_double(fields[value_cols[t]],
                                    at_line + ", column " + header[value_cols[t]]);
      rows.push_back(row);
    }
  }
  if (rows.empty()) {
    throw ValidationError("SchemaMismatch", where + " has a header but no rows");
  }
  int n_trials = 0;
  for (const auto& r : rows) n_trials = std::max(n_trials, r.trial + 1);
  return build_tensor(std::move(speakers), std::move(words), n_trials,
                      static_cast<int>(value_cols.size()), rows);
}

void write_tensor_csv(const ReplicateTensor& tensor, std::ostream& out) {
  out << "speaker,word,trial,time,value\n";
  for (int s = 0; s < tensor.n_speakers; ++s)
    for (int w = 0; w < tensor.n_words; ++w)
      for (int r = 0; r < tensor.n_trials; ++r)
        for (int t = 0; t < tensor.n_times; ++t)
          out << tensor.speaker_ids[s] << ',' << tensor.word_ids[w] << ',' << r + 1 << ','
              << t + 1 << ',' << csv::format_double(tensor.at(s, w, r, t)) << '\n';
}

const WordRecord* WordMetadata::find(const std::string& word) const {
  for (const auto& r : records)
    if (r.word == word) return &r;
  return nullptr;
}

bool WordMetadata::has_attribute(const std::string& name) const {
  static const char* builtin[] = {"vowel",      "vowel_length", "onset",
                                  "coda_first", "coda_last",    "consonant_class"};
  for (const char* b : builtin)
    if (name == b) return true;
  return std::find(extra_columns.begin(), extra_columns.end(), name) != extra_columns.end();
}

std::string WordMetadata::attribute(const std::string& word, const std::string& name) const {
  const WordRecord* rec = find(word);
  if (rec == nullptr) {
    throw ValidationError("MissingWord", "word '" + word + "' has no metadata row");
  }
  if (name == "vowel") return rec->vowel;
  if (name == "vowel_length") return to_string(rec->vowel_length);
  if (name == "onset") return rec->onset;
  if (name == "coda_first") return rec->coda_first;
  if (name == "coda_last") return rec->coda_last;
  if (name == "consonant_class") return to_string(rec->consonant_class);
  auto it = rec->extra.find(name);
  if (it == rec->extra.end()) {
    throw ValidationError("MissingAttribute", "unknown attribute '" + name + "'");
  }
  return it->second;
}

WordMetadata read_metadata_csv(std::istream& in, const std::string& where) {
  auto raw = csv::read_rows(in);
  if (raw.empty()) throw ValidationError("SchemaMismatch", where + " is empty");
  const auto& header = raw.front();
  const int c_word = find_column(header, "word", where);
  const int c_vowel = find_column(header, "vowel", where);
  const int c_len = find_column(header, "vowel_length", where);
  const int c_onset = find_column(header, "onset", where);
  const int c_coda1 = find_column(header, "coda_first", where);
  const int c_coda2 = find_column(header, "coda_last", where);
  const int c_class = find_column(header, "consonant_class", where);

  WordMetadata meta;
  std::vector<int> extra_cols;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    if (c != c_word && c != c_vowel && c != c_len && c != c_onset && c != c_coda1 &&
        c != c_coda2 && c != c_class) {
      extra_cols.push_back(c);
      meta.extra_columns.push_back(header[c]);
    }
  }

  for (size_t i = 1; i < raw.size(); ++i) {
    const auto& fields = raw[i];
    const std::string at_line = where + " line " + std::to_string(i + 1);
    if (fields.size() < header.size()) {
      throw ValidationError("SchemaMismatch", at_line + " has too few fields");
    }
    WordRecord rec;
    rec.word = fields[c_word];
    if (meta.find(rec.word) != nullptr) {
      throw ValidationError("DuplicateWord",
                            "word '" + rec.word + "' has more than one metadata row");
    }
    rec.vowel = fields[c_vowel];
    if (fields[c_len] == "long") {
      rec.vowel_length = VowelLength::long_vowel;
    } else if (fields[c_len] == "short") {
      rec.vowel_length = VowelLength::short_vowel;
    } else {
      throw ValidationError("BadEnum", at_line + ": vowel_length '" + fields[c_len] +
                                           "' is not long|short");
    }
    rec.onset = fields[c_onset];
    rec.coda_first = fields[c_coda1];
    rec.coda_last = fields[c_coda2];
    const std::string& cls = fields[c_class];
    if (cls == "labial") rec.consonant_class = ConsonantClass::labial;
    else if (cls == "alveolar") rec.consonant_class = ConsonantClass::alveolar;
    else if (cls == "nasal") rec.consonant_class = ConsonantClass::nasal;
    else if (cls == "fricative") rec.consonant_class = ConsonantClass::fricative;
    else
      throw ValidationError("BadEnum", at_line + ": consonant_class '" + cls +
                                           "' is not labial|alveolar|nasal|fricative");
    for (size_t k = 0; k < extra_cols.size(); ++k) {
      rec.extra[meta.extra_columns[k]] = fields[extra_cols[k]];
    }
    meta.records.push_back(std::move(rec));
  }
  return meta;
}

WordMetadata load_metadata(const std::filesystem::path& path) {
  auto in = open_file(path);
  return read_metadata_csv(in, path.filename().string());
}

void write_metadata_csv(const WordMetadata& metadata, std::ostream& out) {
  out << "word,vowel,vowel_length,onset,coda_first,coda_last,consonant_class";
  for (const auto& c : metadata.extra_columns) out << ',' << c;
  out << '\n';
  for (const auto& r : metadata.records) {
    out << r.word << ',' << r.vowel << ',' << to_string(r.vowel_length) << ',' << r.onset
        << ',' << r.coda_first << ',' << r.coda_last << ',' << to_string(r.consonant_class);
    for (const auto& c : metadata.extra_columns) {
      auto it = r.extra.find(c);
      out << ',' << (it == r.extra.end() ? "" : it->second);
    }
    out << '\n';
  }
}

std::vector<std::string> check_metadata(const WordMetadata& metadata,
                                        const ReplicateTensor& tensor) {
  std::vector<std::string> missing;
  for (const auto& w : tensor.word_ids)
    if (metadata.find(w) == nullptr) missing.push_back(w);
  if (!missing.empty()) {
    std::string list;
    for (const auto& w : missing) list += (list.empty() ? "" : ", ") + w;
    throw ValidationError("MissingWord", "tensor words without metadata: " + list);
  }
  std::vector<std::string> warnings;
  for (const auto& r : metadata.records) {
    if (std::find(tensor.word_ids.begin(), tensor.word_ids.end(), r.word) ==
        tensor.word_ids.end()) {
      warnings.push_back("UnknownWord: metadata word '" + r.word + "' is not in the tensor");
    }
  }
  return warnings;
}

Eigen::MatrixXd trial_mean(const ReplicateTensor& tensor, int speaker) {
  if (speaker < 0 || speaker >= tensor.n_speakers) {
    throw ValidationError("IndexOutOfRange",
                          "speaker index " + std::to_string(speaker) + " not in [0, " +
                              std::to_string(tensor.n_speakers) + ")");
  }
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(tensor.n_words, tensor.n_times);
  for (int r = 0; r < tensor.n_trials; ++r) mean += tensor.slice(speaker, r);
  mean /= static_cast<double>(tensor.n_trials);
  return mean;
}

ResidualTensor residualize(const ReplicateTensor& tensor) {
  ResidualTensor out;
  static_cast<ReplicateTensor&>(out) = tensor;

  // An input whose trial means already vanish (to 1e-12 of the value
  // scale) is returned unchanged, which makes residualization an exact
  // fixed point on its own output.
  double scale = 0.0;
  for (double v : tensor.values) scale = std::max(scale, std::abs(v));
  double max_mean = 0.0;
  std::vector<Eigen::MatrixXd> means(tensor.n_speakers);
  for (int s = 0; s < tensor.n_speakers; ++s) {
    means[s] = trial_mean(tensor, s);
    max_mean = std::max(max_mean, means[s].cwiseAbs().maxCoeff());
  }
  if (max_mean <= 1e-12 * scale) return out;

  for (int s = 0; s < tensor.n_speakers; ++s)
    for (int w = 0; w < tensor.n_words; ++w)
      for (int r = 0; r < tensor.n_trials; ++r)
        for (int t = 0; t < tensor.n_times; ++t)
          out.at(s, w, r, t) = tensor.at(s, w, r, t) - means[s](w, t);
  return out;
}

ResidualTensor subset_words(const ResidualTensor& tensor, const WordMetadata& metadata,
                            const WordFilter& filter) {
  std::vector<int> keep;
  for (int w = 0; w < tensor.n_words; ++w) {
    if (filter.allowed.count(metadata.attribute(tensor.word_ids[w], filter.attribute)) > 0) {
      keep.push_back(w);
    }
  }
  if (keep.size() < 2) {
    throw ValidationError("TooFewWords", "filter on '" + filter.attribute + "' keeps " +
                                             std::to_string(keep.size()) +
                                             " words, need at least 2");
  }
  ResidualTensor out;
  out.n_speakers = tensor.n_speakers;
  out.n_words = static_cast<int>(keep.size());
  out.n_trials = tensor.n_trials;
  out.n_times = tensor.n_times;
  out.speaker_ids = tensor.speaker_ids;
  for (int w : keep) out.word_ids.push_back(tensor.word_ids[w]);
  out.values.resize(static_cast<size_t>(out.n_speakers) * out.n_words * out.n_trials *
                    out.n_times);
  for (int s = 0; s < out.n_speakers; ++s)
    for (int w = 0; w < out.n_words; ++w)
      for (int r = 0; r < out.n_trials; ++r)
        for (int t = 0; t < out.n_times; ++t)
          out.at(s, w, r, t) = tensor.at(s, keep[w], r, t);
  return out;
}

WordFilter WordFilter::parse(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("SchemaMismatch",
                          "filter must look like attribute=value[,value...]: '" + text + "'");
  }
  WordFilter f;
  f.attribute = text.substr(0, eq);
  std::string rest = text.substr(eq + 1);
  std::string current;
  for (char c : rest) {
    if (c == ',') {
      f.allowed.insert(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  f.allowed.insert(current);
  return f;
}

}  // namespace krongraph

#include "seqrec/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace seqrec {

namespace {

constexpr char kMagic[4] = {'S', 'R', 'A', 'E'};
constexpr std::uint8_t kVersion = 0x01;

void write_u16(std::ostream& out, std::uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    out.write(b, 2);
}

void write_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

std::uint16_t read_u16(std::istream& in) {
    unsigned char b[2];
    in.read(reinterpret_cast<char*>(b), 2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

void write_f32(std::ostream& out, float f) {
    std::uint32_t v;
    std::memcpy(&v, &f, 4);
    write_u32(out, v);
}

float read_f32(std::istream& in) {
    std::uint32_t v = read_u32(in);
    float f;
    std::memcpy(&f, &v, 4);
    return f;
}

bool row_is_zero(std::span<const float> row) {
    return std::all_of(row.begin(), row.end(), [](float v) { return v == 0.0f; });
}

// Aligns raw (id, vector) entries to a vocabulary.
EmbeddingMatrix align_to_vocab(const RawEmbeddings& raw, const ItemVocab& vocab,
                               const EmbeddingLoadOptions& opts,
                               EmbeddingLoadReport* report) {
    EmbeddingMatrix emb;
    emb.dim = raw.matrix.dim;
    emb.num_rows = vocab.size();
    emb.data.assign(static_cast<std::size_t>(emb.num_rows) * emb.dim, 0.0f);
    emb.zero_row.assign(emb.num_rows, 1);

    std::vector<std::uint8_t> filled(emb.num_rows, 0);
    std::size_t ignored = 0;
    for (std::size_t r = 0; r < raw.ids.size(); ++r) {
        auto idx = vocab.encode(raw.ids[r]);
        if (!idx) {
            ++ignored;
            continue;
        }
        auto src = raw.matrix.row(static_cast<ItemIndex>(r));
        std::copy(src.begin(), src.end(), emb.row(*idx).begin());
        filled[*idx] = 1;
        emb.zero_row[*idx] = row_is_zero(src) ? 1 : 0;
    }

    std::size_t missing = 0;
    for (ItemIndex i = 0; i < vocab.size(); ++i) {
        if (filled[i]) continue;
        ++missing;
        if (!opts.allow_missing)
            throw DataError("embedding file is missing vocabulary item '" + vocab.decode(i) +
                            "'");
        // Row stays zero and flagged.
    }
    if (report) {
        report->ignored_items = ignored;
        report->missing_items = missing;
    }
    return emb;
}

} // namespace

double cosine(const EmbeddingMatrix& emb, ItemIndex a, ItemIndex b) {
    auto ra = emb.row(a);
    auto rb = emb.row(b);
    double dot = 0.0;
    for (std::size_t i = 0; i < emb.dim; ++i) dot += static_cast<double>(ra[i]) * rb[i];
    return dot;
}

RawEmbeddings load_embeddings_raw(const std::string& path, char text_delimiter) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw DataError("cannot open embedding file: " + path);
    char magic[4] = {};
    probe.read(magic, 4);
    bool binary = probe.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0;
    probe.close();

    RawEmbeddings raw;
    if (binary) {
        std::ifstream in(path, std::ios::binary);
        in.seekg(4);
        std::uint8_t version = 0;
        in.read(reinterpret_cast<char*>(&version), 1);
        if (version != kVersion)
            throw DataError(path + ": unsupported embedding format version " +
                            std::to_string(version) + " (byte offset 4)");
        std::uint32_t dim = read_u32(in);
        std::uint64_t count = read_u64(in);
        raw.matrix.dim = dim;
        raw.matrix.num_rows = count;
        raw.matrix.data.reserve(count * dim);
        raw.ids.reserve(count);
        for (std::uint64_t r = 0; r < count; ++r) {
            std::uint16_t id_len = read_u16(in);
            std::string id(id_len, '\0');
            in.read(id.data(), id_len);
            for (std::uint32_t d = 0; d < dim; ++d) raw.matrix.data.push_back(read_f32(in));
            if (!in)
                throw DataError(path + ": truncated embedding record at byte offset " +
                                std::to_string(static_cast<long long>(in.tellg())));
            raw.ids.push_back(std::move(id));
        }
    } else {
        std::ifstream in(path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::istringstream ss(line);
            std::string id;
            if (!std::getline(ss, id, text_delimiter) || id.empty())
                throw DataError(path + ":" + std::to_string(line_no) + ": missing item id");
            std::vector<float> vals;
            std::string tok;
            while (std::getline(ss, tok, text_delimiter)) {
                if (tok.empty()) continue;
                try {
                    vals.push_back(std::stof(tok));
                } catch (const std::exception&) {
                    throw DataError(path + ":" + std::to_string(line_no) +
                                    ": unparseable value '" + tok + "'");
                }
            }
            if (raw.matrix.dim == 0) raw.matrix.dim = vals.size();
            if (vals.size() != raw.matrix.dim)
                throw DataError(path + ":" + std::to_string(line_no) + ": dimension mismatch (" +
                                std::to_string(vals.size()) + " vs " +
                                std::to_string(raw.matrix.dim) + ")");
            raw.ids.push_back(std::move(id));
            raw.matrix.data.insert(raw.matrix.data.end(), vals.begin(), vals.end());
        }
        raw.matrix.num_rows = raw.ids.size();
    }
    if (raw.matrix.dim == 0 || raw.ids.empty())
        throw DataError(path + ": empty embedding file");
    raw.matrix.zero_row.resize(raw.ids.size());
    for (ItemIndex i = 0; i < raw.ids.size(); ++i)
        raw.matrix.zero_row[i] = row_is_zero(raw.matrix.row(i)) ? 1 : 0;
    return raw;
}

void save_embeddings_raw(const std::string& path, const RawEmbeddings& raw, bool binary,
                         char text_delimiter) {
    if (binary) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write " + path);
        out.write(kMagic, 4);
        out.put(static_cast<char>(kVersion));
        write_u32(out, static_cast<std::uint32_t>(raw.matrix.dim));
        write_u64(out, raw.ids.size());
        for (std::size_t r = 0; r < raw.ids.size(); ++r) {
            const auto& id = raw.ids[r];
            if (id.size() > 0xffff)
                throw DataError("item id longer than 65535 bytes: " + id.substr(0, 32));
            write_u16(out, static_cast<std::uint16_t>(id.size()));
            out.write(id.data(), static_cast<std::streamsize>(id.size()));
            for (float v : raw.matrix.row(static_cast<ItemIndex>(r))) write_f32(out, v);
        }
    } else {
        std::ofstream out(path);
        if (!out) throw DataError("cannot write " + path);
        out.precision(9);
        for (std::size_t r = 0; r < raw.ids.size(); ++r) {
            out << raw.ids[r];
            for (float v : raw.matrix.row(static_cast<ItemIndex>(r)))
                out << text_delimiter << v;
            out << '\n';
        }
    }
}

EmbeddingMatrix load_embeddings_text(const std::string& path, const ItemVocab& vocab,
                                     const EmbeddingLoadOptions& opts,
                                     EmbeddingLoadReport* report) {
    return align_to_vocab(load_embeddings_raw(path, opts.delimiter), vocab, opts, report);
}

EmbeddingMatrix load_embeddings_binary(const std::string& path, const ItemVocab& vocab,
                                       const EmbeddingLoadOptions& opts,
                                       EmbeddingLoadReport* report) {
    return align_to_vocab(load_embeddings_raw(path, opts.delimiter), vocab, opts, report);
}

EmbeddingMatrix load_embeddings(const std::string& path, const ItemVocab& vocab,
                                const EmbeddingLoadOptions& opts,
                                EmbeddingLoadReport* report) {
    return align_to_vocab(load_embeddings_raw(path, opts.delimiter), vocab, opts, report);
}

void save_embeddings_binary(const std::string& path, const EmbeddingMatrix& emb,
                            const ItemVocab& vocab) {
    RawEmbeddings raw;
    raw.ids = vocab.index_to_id;
    raw.matrix = emb;
    save_embeddings_raw(path, raw, /*binary=*/true);
}

void save_embeddings_text(const std::string& path, const EmbeddingMatrix& emb,
                          const ItemVocab& vocab, char delimiter) {
    RawEmbeddings raw;
    raw.ids = vocab.index_to_id;
    raw.matrix = emb;
    save_embeddings_raw(path, raw, /*binary=*/false, delimiter);
}

void normalize_rows(EmbeddingMatrix& emb) {
    emb.zero_row.assign(emb.num_rows, 0);
    for (ItemIndex i = 0; i < emb.num_rows; ++i) {
        auto r = emb.row(i);
        double norm_sq = 0.0;
        for (float v : r) norm_sq += static_cast<double>(v) * v;
        if (norm_sq == 0.0) {
            emb.zero_row[i] = 1;
            continue;
        }
        double inv = 1.0 / std::sqrt(norm_sq);
        for (float& v : r) v = static_cast<float>(v * inv);
    }
    emb.normalized = true;
}

} // namespace seqrec

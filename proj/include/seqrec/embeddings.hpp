#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "seqrec/corpus.hpp"
#include "seqrec/types.hpp"

namespace seqrec {

// Dense per-item feature matrix, row order aligned to the item vocabulary.
struct EmbeddingMatrix {
    std::size_t dim = 0;
    std::size_t num_rows = 0;
    std::vector<float> data; // row-major, num_rows * dim
    bool normalized = false;
    std::vector<std::uint8_t> zero_row; // 1 where the row is all-zero

    std::span<const float> row(ItemIndex i) const {
        return {data.data() + static_cast<std::size_t>(i) * dim, dim};
    }
    std::span<float> row(ItemIndex i) {
        return {data.data() + static_cast<std::size_t>(i) * dim, dim};
    }
};

double cosine(const EmbeddingMatrix& emb, ItemIndex a, ItemIndex b);

struct EmbeddingLoadOptions {
    // Substitute a zero vector for vocabulary items missing from the file
    // instead of aborting.
    bool allow_missing = false;
    char delimiter = ' ';
};

struct EmbeddingLoadReport {
    std::size_t ignored_items = 0; // present in file, absent from vocab
    std::size_t missing_items = 0; // absent from file, zero-substituted
};

// Text format: one line per item, `item_id<sep>v1<sep>...<sep>vD`.
EmbeddingMatrix load_embeddings_text(const std::string& path, const ItemVocab& vocab,
                                     const EmbeddingLoadOptions& opts = {},
                                     EmbeddingLoadReport* report = nullptr);

// Binary format: magic "SRAE", version 0x01, u32le dim, u64le item count,
// then per item: u16le id byte-length, id bytes, dim f32le values.
EmbeddingMatrix load_embeddings_binary(const std::string& path, const ItemVocab& vocab,
                                       const EmbeddingLoadOptions& opts = {},
                                       EmbeddingLoadReport* report = nullptr);

// Dispatches on the magic bytes.
EmbeddingMatrix load_embeddings(const std::string& path, const ItemVocab& vocab,
                                const EmbeddingLoadOptions& opts = {},
                                EmbeddingLoadReport* report = nullptr);

void save_embeddings_binary(const std::string& path, const EmbeddingMatrix& emb,
                            const ItemVocab& vocab);
void save_embeddings_text(const std::string& path, const EmbeddingMatrix& emb,
                          const ItemVocab& vocab, char delimiter = ' ');

// Raw reader for files whose item set is not tied to a vocabulary
// (convert-embeddings). Returns ids in file order.
struct RawEmbeddings {
    std::vector<std::string> ids;
    EmbeddingMatrix matrix;
};
RawEmbeddings load_embeddings_raw(const std::string& path, char text_delimiter = ' ');
void save_embeddings_raw(const std::string& path, const RawEmbeddings& raw, bool binary,
                         char text_delimiter = ' ');

// Divides each nonzero row by its Euclidean norm; zero rows pass through and
// are flagged. Idempotent.
void normalize_rows(EmbeddingMatrix& emb);

} // namespace seqrec

// Copyright 2026 The polarembed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Snowball Turkish stemmer.
//
// Follows the published turkish.sbl step definitions: nominal verb suffixes,
// noun suffix chains (including the recursive "-ki" chain), then the postlude
// that restores voiced final consonants. The routines below keep Snowball's
// cursor model (cursor / limit / bra / ket, positions saved as distance from
// the end so they survive deletions) so that the control flow maps one to one
// onto the reference definitions.

#include <array>
#include <initializer_list>
#include <string>
#include <string_view>

#include "polarembed/common.hpp"
#include "polarembed/textprep.hpp"

namespace polarembed::textprep {
namespace {

constexpr std::u32string_view kVowel = U"aeiouöüı";
constexpr std::u32string_view kU = U"iuüı";
constexpr std::u32string_view kVowel1 = U"aouı";
constexpr std::u32string_view kVowel2 = U"eiöü";
constexpr std::u32string_view kVowel3 = U"aı";
constexpr std::u32string_view kVowel4 = U"ei";
constexpr std::u32string_view kVowel5 = U"ou";
constexpr std::u32string_view kVowel6 = U"öü";

using Among = std::initializer_list<std::u32string_view>;

constexpr Among kPossessives = {U"m", U"n", U"miz", U"niz", U"muz", U"nuz", U"müz", U"nüz", U"mız", U"nız"};
constexpr Among kLArI = {U"leri", U"ları"};
constexpr Among kNU = {U"ni", U"nu", U"nü", U"nı"};
constexpr Among kNUn = {U"in", U"un", U"ün", U"ın"};
constexpr Among kYA = {U"a", U"e"};
constexpr Among kNA = {U"na", U"ne"};
constexpr Among kDA = {U"da", U"ta", U"de", U"te"};
constexpr Among kNdA = {U"nda", U"nde"};
constexpr Among kDAn = {U"dan", U"tan", U"den", U"ten"};
constexpr Among kNdAn = {U"ndan", U"nden"};
constexpr Among kYlA = {U"la", U"le"};
constexpr Among kNcA = {U"ca", U"ce"};
constexpr Among kYUm = {U"im", U"um", U"üm", U"ım"};
constexpr Among kSUn = {U"sin", U"sun", U"sün", U"sın"};
constexpr Among kYUz = {U"iz", U"uz", U"üz", U"ız"};
constexpr Among kSUnUz = {U"siniz", U"sunuz", U"sünüz", U"sınız"};
constexpr Among kLAr = {U"lar", U"ler"};
constexpr Among kNUz = {U"niz", U"nuz", U"nüz", U"nız"};
constexpr Among kDUr = {U"dir", U"tir", U"dur", U"tur", U"dür", U"tür", U"dır", U"tır"};
constexpr Among kCAsInA = {U"casına", U"cesine"};
constexpr Among kYDU = {U"di",  U"ti",  U"dik", U"tik", U"duk", U"tuk", U"dük", U"tük",
                        U"dık", U"tık", U"dim", U"tim", U"dum", U"tum", U"düm", U"tüm",
                        U"dım", U"tım", U"din", U"tin", U"dun", U"tun", U"dün", U"tün",
                        U"dın", U"tın", U"du",  U"tu",  U"dü",  U"tü",  U"dı",  U"tı"};
constexpr Among kYsA = {U"sa", U"se", U"sak", U"sek", U"sam", U"sem", U"san", U"sen"};
constexpr Among kYmUs = {U"miş", U"muş", U"müş", U"mış"};

class TurkishStemmer {
 public:
  explicit TurkishStemmer(std::u32string word) : s_(std::move(word)) {
    limit_ = static_cast<int>(s_.size());
    ket_ = limit_;
  }

  std::u32string run() {
    remove_proper_noun_suffix();
    if (!more_than_one_syllable_word()) return s_;
    limit_backward_ = cursor_;
    cursor_ = limit_;
    int v1 = mark();
    stem_nominal_verb_suffixes();
    restore(v1);
    if (!continue_stemming_noun_suffixes_) return s_;
    int v2 = mark();
    stem_noun_suffixes();
    restore(v2);
    cursor_ = limit_backward_;
    postlude();
    return s_;
  }

 private:
  // --- Snowball runtime -------------------------------------------------
  int mark() const { return limit_ - cursor_; }
  void restore(int m) { cursor_ = limit_ - m; }

  static bool in(std::u32string_view g, char32_t c) { return g.find(c) != std::u32string_view::npos; }

  bool ch_b(char32_t c) {
    if (cursor_ <= limit_backward_ || s_[cursor_ - 1] != c) return false;
    --cursor_;
    return true;
  }
  bool ch(char32_t c) {
    if (cursor_ >= limit_ || s_[cursor_] != c) return false;
    ++cursor_;
    return true;
  }
  bool in_grouping_b(std::u32string_view g) {
    if (cursor_ <= limit_backward_ || !in(g, s_[cursor_ - 1])) return false;
    --cursor_;
    return true;
  }
  bool out_grouping_b(std::u32string_view g) {
    if (cursor_ <= limit_backward_ || in(g, s_[cursor_ - 1])) return false;
    --cursor_;
    return true;
  }
  bool go_out_grouping_b(std::u32string_view g) {
    while (cursor_ > limit_backward_) {
      if (in(g, s_[cursor_ - 1])) return true;
      --cursor_;
    }
    return false;
  }
  bool go_out_grouping(std::u32string_view g) {
    while (cursor_ < limit_) {
      if (in(g, s_[cursor_])) return true;
      ++cursor_;
    }
    return false;
  }
  bool eq_s_b(std::u32string_view lit) {
    const int n = static_cast<int>(lit.size());
    if (cursor_ - limit_backward_ < n) return false;
    if (std::u32string_view(s_).substr(cursor_ - n, n) != lit) return false;
    cursor_ -= n;
    return true;
  }
  // No entry in any table is a suffix of another entry of the same table, so
  // at most one entry can match.
  bool find_among_b(Among table) {
    for (auto entry : table) {
      if (eq_s_b(entry)) return true;
    }
    return false;
  }
  void replace(int c_bra, int c_ket, std::u32string_view with) {
    const int adjustment = static_cast<int>(with.size()) - (c_ket - c_bra);
    s_.replace(c_bra, c_ket - c_bra, with);
    limit_ += adjustment;
    if (cursor_ >= c_ket) {
      cursor_ += adjustment;
    } else if (cursor_ > c_bra) {
      cursor_ = c_bra;
    }
  }
  void slice_from(std::u32string_view with) {
    replace(bra_, ket_, with);
    ket_ = bra_ + static_cast<int>(with.size());
  }
  void slice_del() { slice_from(U""); }

  // --- suffix markers ---------------------------------------------------
  bool check_vowel_harmony() {
    const int v1 = mark();
    if (!go_out_grouping_b(kVowel)) return false;
    const int v2 = mark();
    auto pair = [&](char32_t vowel, std::u32string_view next) {
      restore(v2);
      return ch_b(vowel) && go_out_grouping_b(next);
    };
    if (!(pair(U'a', kVowel1) || pair(U'e', kVowel2) || pair(U'ı', kVowel3) || pair(U'i', kVowel4) ||
          pair(U'o', kVowel5) || pair(U'ö', kVowel6) || pair(U'u', kVowel5) || pair(U'ü', kVowel6))) {
      return false;
    }
    restore(v1);
    return true;
  }

  // Shared shape of the optional n/s/y consonant rules: either the consonant
  // preceded by a vowel, or no consonant and a vowel one step further back.
  bool optional_consonant(char32_t consonant) {
    const int v1 = mark();
    if (ch_b(consonant)) {
      const int v2 = mark();
      if (in_grouping_b(kVowel)) {
        restore(v2);
        return true;
      }
    }
    restore(v1);
    if (ch_b(consonant)) return false;
    restore(v1);
    const int v3 = mark();
    if (cursor_ <= limit_backward_) return false;
    --cursor_;
    if (!in_grouping_b(kVowel)) return false;
    restore(v3);
    return true;
  }

  bool optional_u_vowel() {
    const int v1 = mark();
    if (in_grouping_b(kU)) {
      const int v2 = mark();
      if (out_grouping_b(kVowel)) {
        restore(v2);
        return true;
      }
    }
    restore(v1);
    if (in_grouping_b(kU)) return false;
    restore(v1);
    const int v3 = mark();
    if (cursor_ <= limit_backward_) return false;
    --cursor_;
    if (!out_grouping_b(kVowel)) return false;
    restore(v3);
    return true;
  }

  bool possessives() { return find_among_b(kPossessives) && optional_u_vowel(); }
  bool sU() { return check_vowel_harmony() && in_grouping_b(kU) && optional_consonant(U's'); }
  bool lArI() { return find_among_b(kLArI); }
  bool yU() { return check_vowel_harmony() && in_grouping_b(kU) && optional_consonant(U'y'); }
  bool nU() { return check_vowel_harmony() && find_among_b(kNU); }
  bool nUn() { return check_vowel_harmony() && find_among_b(kNUn) && optional_consonant(U'n'); }
  bool yA() { return check_vowel_harmony() && find_among_b(kYA) && optional_consonant(U'y'); }
  bool nA() { return check_vowel_harmony() && find_among_b(kNA); }
  bool DA() { return check_vowel_harmony() && find_among_b(kDA); }
  bool ndA() { return check_vowel_harmony() && find_among_b(kNdA); }
  bool DAn() { return check_vowel_harmony() && find_among_b(kDAn); }
  bool ndAn() { return check_vowel_harmony() && find_among_b(kNdAn); }
  bool ylA() { return check_vowel_harmony() && find_among_b(kYlA) && optional_consonant(U'y'); }
  bool ncA() { return check_vowel_harmony() && find_among_b(kNcA) && optional_consonant(U'n'); }
  bool yUm() { return check_vowel_harmony() && find_among_b(kYUm) && optional_consonant(U'y'); }
  bool sUn() { return check_vowel_harmony() && find_among_b(kSUn); }
  bool yUz() { return check_vowel_harmony() && find_among_b(kYUz) && optional_consonant(U'y'); }
  bool sUnUz() { return find_among_b(kSUnUz); }
  bool lAr() { return check_vowel_harmony() && find_among_b(kLAr); }
  bool nUz() { return check_vowel_harmony() && find_among_b(kNUz); }
  bool DUr() { return check_vowel_harmony() && find_among_b(kDUr); }
  bool cAsInA() { return find_among_b(kCAsInA); }
  bool yDU() { return check_vowel_harmony() && find_among_b(kYDU) && optional_consonant(U'y'); }
  bool ysA() { return find_among_b(kYsA) && optional_consonant(U'y'); }
  bool ymUs() { return check_vowel_harmony() && find_among_b(kYmUs) && optional_consonant(U'y'); }
  bool yken() { return eq_s_b(U"ken") && optional_consonant(U'y'); }

  // Tries each marker in order from the same start position.
  template <typename... Fs>
  bool any_of(Fs... markers) {
    const int v = mark();
    bool found = false;
    (void)((restore(v), found = (this->*markers)()) || ...);
    return found;
  }

  // --- steps ------------------------------------------------------------
  bool stem_nominal_verb_suffixes() {
    using S = TurkishStemmer;
    ket_ = cursor_;
    continue_stemming_noun_suffixes_ = true;
    const int v1 = mark();
    [&] {
      if (any_of(&S::ymUs, &S::yDU, &S::ysA, &S::yken)) return;
      restore(v1);
      if (cAsInA()) {
        const int v3 = mark();
        if (!any_of(&S::sUnUz, &S::lAr, &S::yUm, &S::sUn, &S::yUz)) restore(v3);
        if (ymUs()) return;
      }
      restore(v1);
      if (lAr()) {
        bra_ = cursor_;
        slice_del();
        const int v4 = mark();
        ket_ = cursor_;
        if (!any_of(&S::DUr, &S::yDU, &S::ysA, &S::ymUs)) restore(v4);
        continue_stemming_noun_suffixes_ = false;
        return;
      }
      restore(v1);
      if (nUz() && any_of(&S::yDU, &S::ysA)) return;
      restore(v1);
      if (any_of(&S::sUnUz, &S::yUz, &S::sUn, &S::yUm)) {
        bra_ = cursor_;
        slice_del();
        const int v8 = mark();
        ket_ = cursor_;
        if (!ymUs()) restore(v8);
        return;
      }
      restore(v1);
      if (!DUr()) {
        failed_ = true;
        return;
      }
      bra_ = cursor_;
      slice_del();
      const int v9 = mark();
      ket_ = cursor_;
      const int v10 = mark();
      if (!any_of(&S::sUnUz, &S::lAr, &S::yUm, &S::sUn, &S::yUz)) restore(v10);
      if (!ymUs()) restore(v9);
    }();
    if (failed_) {
      failed_ = false;
      return false;
    }
    bra_ = cursor_;
    slice_del();
    return true;
  }

  // Optional "lAr then chain" tail shared by several branches.
  void optional_lar_chain() {
    const int v = mark();
    ket_ = cursor_;
    if (!lAr()) {
      restore(v);
      return;
    }
    bra_ = cursor_;
    slice_del();
    if (!stem_suffix_chain_before_ki()) restore(v);
  }

  bool possessives_or_su() {
    const int v = mark();
    if (possessives()) return true;
    restore(v);
    return sU();
  }

  bool stem_suffix_chain_before_ki() {
    ket_ = cursor_;
    if (!eq_s_b(U"ki")) return false;
    const int v1 = mark();

    if (DA()) {
      bra_ = cursor_;
      slice_del();
      const int v2 = mark();
      ket_ = cursor_;
      const int v3 = mark();
      if (lAr()) {
        bra_ = cursor_;
        slice_del();
        const int v4 = mark();
        if (!stem_suffix_chain_before_ki()) restore(v4);
      } else {
        restore(v3);
        if (!possessives()) {
          restore(v2);
        } else {
          bra_ = cursor_;
          slice_del();
          optional_lar_chain();
        }
      }
      return true;
    }

    restore(v1);
    if (nUn()) {
      bra_ = cursor_;
      slice_del();
      const int v6 = mark();
      ket_ = cursor_;
      const int v7 = mark();
      if (lArI()) {
        bra_ = cursor_;
        slice_del();
        return true;
      }
      restore(v7);
      ket_ = cursor_;
      if (possessives_or_su()) {
        bra_ = cursor_;
        slice_del();
        optional_lar_chain();
        return true;
      }
      restore(v7);
      if (!stem_suffix_chain_before_ki()) restore(v6);
      return true;
    }

    restore(v1);
    if (!ndA()) return false;
    const int v10 = mark();
    if (lArI()) {
      bra_ = cursor_;
      slice_del();
      return true;
    }
    restore(v10);
    if (sU()) {
      bra_ = cursor_;
      slice_del();
      optional_lar_chain();
      return true;
    }
    restore(v10);
    return stem_suffix_chain_before_ki();
  }

  bool stem_noun_suffixes() {
    using S = TurkishStemmer;
    const int v1 = mark();

    ket_ = cursor_;
    if (lAr()) {
      bra_ = cursor_;
      slice_del();
      const int v2 = mark();
      if (!stem_suffix_chain_before_ki()) restore(v2);
      return true;
    }

    restore(v1);
    ket_ = cursor_;
    if (ncA()) {
      bra_ = cursor_;
      slice_del();
      const int v3 = mark();
      const int v4 = mark();
      ket_ = cursor_;
      if (lArI()) {
        bra_ = cursor_;
        slice_del();
        return true;
      }
      restore(v4);
      ket_ = cursor_;
      if (possessives_or_su()) {
        bra_ = cursor_;
        slice_del();
        optional_lar_chain();
        return true;
      }
      restore(v4);
      ket_ = cursor_;
      if (!lAr()) {
        restore(v3);
        return true;
      }
      bra_ = cursor_;
      slice_del();
      if (!stem_suffix_chain_before_ki()) restore(v3);
      return true;
    }

    restore(v1);
    ket_ = cursor_;
    if (any_of(&S::ndA, &S::nA)) {
      const int v8 = mark();
      if (lArI()) {
        bra_ = cursor_;
        slice_del();
        return true;
      }
      restore(v8);
      if (sU()) {
        bra_ = cursor_;
        slice_del();
        optional_lar_chain();
        return true;
      }
      restore(v8);
      if (stem_suffix_chain_before_ki()) return true;
    }

    restore(v1);
    ket_ = cursor_;
    if (any_of(&S::ndAn, &S::nU)) {
      const int v11 = mark();
      if (sU()) {
        bra_ = cursor_;
        slice_del();
        optional_lar_chain();
        return true;
      }
      restore(v11);
      if (lArI()) return true;
    }

    restore(v1);
    ket_ = cursor_;
    if (DAn()) {
      bra_ = cursor_;
      slice_del();
      const int v13 = mark();
      ket_ = cursor_;
      const int v14 = mark();
      if (possessives()) {
        bra_ = cursor_;
        slice_del();
        optional_lar_chain();
        return true;
      }
      restore(v14);
      if (lAr()) {
        bra_ = cursor_;
        slice_del();
        const int v16 = mark();
        if (!stem_suffix_chain_before_ki()) restore(v16);
        return true;
      }
      restore(v14);
      if (!stem_suffix_chain_before_ki()) restore(v13);
      return true;
    }

    restore(v1);
    ket_ = cursor_;
    if (any_of(&S::nUn, &S::ylA)) {
      bra_ = cursor_;
      slice_del();
      const int v18 = mark();
      const int v19 = mark();
      ket_ = cursor_;
      if (lAr()) {
        bra_ = cursor_;
        slice_del();
        if (stem_suffix_chain_before_ki()) return true;
      }
      restore(v19);
      ket_ = cursor_;
      if (possessives_or_su()) {
        bra_ = cursor_;
        slice_del();
        optional_lar_chain();
        return true;
      }
      restore(v19);
      if (!stem_suffix_chain_before_ki()) restore(v18);
      return true;
    }

    restore(v1);
    ket_ = cursor_;
    if (lArI()) {
      bra_ = cursor_;
      slice_del();
      return true;
    }

    restore(v1);
    if (stem_suffix_chain_before_ki()) return true;

    restore(v1);
    ket_ = cursor_;
    if (any_of(&S::DA, &S::yU, &S::yA)) {
      bra_ = cursor_;
      slice_del();
      const int v23 = mark();
      ket_ = cursor_;
      const int v24 = mark();
      bool deleted_tail = false;
      if (possessives()) {
        bra_ = cursor_;
        slice_del();
        const int v25 = mark();
        ket_ = cursor_;
        if (!lAr()) restore(v25);
        deleted_tail = true;
      } else {
        restore(v24);
        deleted_tail = lAr();
        if (!deleted_tail) restore(v23);
      }
      if (deleted_tail) {
        bra_ = cursor_;
        slice_del();
        ket_ = cursor_;
        if (!stem_suffix_chain_before_ki()) restore(v23);
      }
      return true;
    }

    restore(v1);
    ket_ = cursor_;
    if (!possessives_or_su()) return false;
    bra_ = cursor_;
    slice_del();
    optional_lar_chain();
    return true;
  }

  bool post_process_last_consonants() {
    ket_ = cursor_;
    std::u32string_view replacement;
    if (ch_b(U'b')) {
      replacement = U"p";
    } else if (ch_b(U'c')) {
      replacement = U"ç";
    } else if (ch_b(U'd')) {
      replacement = U"t";
    } else if (ch_b(U'ğ')) {
      replacement = U"k";
    } else {
      return false;
    }
    bra_ = cursor_;
    slice_from(replacement);
    return true;
  }

  bool append_u_to_stems_ending_with_d_or_g() {
    ket_ = cursor_;
    bra_ = cursor_;
    if (!ch_b(U'd') && !ch_b(U'g')) return false;
    if (!go_out_grouping_b(kVowel)) return false;
    const int v1 = mark();
    auto last_vowel = [&](char32_t a, char32_t b) {
      restore(v1);
      return ch_b(a) || ch_b(b);
    };
    if (last_vowel(U'a', U'ı')) {
      slice_from(U"ı");
    } else if (last_vowel(U'e', U'i')) {
      slice_from(U"i");
    } else if (last_vowel(U'o', U'u')) {
      slice_from(U"u");
    } else if (last_vowel(U'ö', U'ü')) {
      slice_from(U"ü");
    } else {
      return false;
    }
    return true;
  }

  bool is_reserved_word() {
    if (!eq_s_b(U"ad")) return false;
    const int v1 = mark();
    if (!eq_s_b(U"soy")) restore(v1);
    return cursor_ <= limit_backward_;
  }

  void remove_proper_noun_suffix() {
    const int v1 = cursor_;
    bra_ = cursor_;
    bool found = true;
    while (true) {
      const int v2 = cursor_;
      if (!ch(U'\'')) {
        cursor_ = v2;
        break;
      }
      cursor_ = v2;
      if (cursor_ >= limit_) {
        found = false;
        break;
      }
      ++cursor_;
    }
    if (found) {
      ket_ = cursor_;
      slice_del();
    }
    cursor_ = v1;

    const int v3 = cursor_;
    if (cursor_ + 2 <= limit_) {
      cursor_ += 2;
      bool hit = false;
      while (true) {
        if (cursor_ < limit_ && s_[cursor_] == U'\'') {
          hit = true;
          break;
        }
        if (cursor_ >= limit_) break;
        ++cursor_;
      }
      if (hit) {
        bra_ = cursor_;
        cursor_ = limit_;
        ket_ = cursor_;
        slice_del();
      }
    }
    cursor_ = v3;
  }

  bool more_than_one_syllable_word() {
    const int v1 = cursor_;
    for (int i = 0; i < 2; ++i) {
      if (!go_out_grouping(kVowel)) return false;
      ++cursor_;
    }
    cursor_ = v1;
    return true;
  }

  bool postlude() {
    limit_backward_ = cursor_;
    cursor_ = limit_;
    const int v1 = mark();
    if (is_reserved_word()) return false;
    restore(v1);
    const int v2 = mark();
    append_u_to_stems_ending_with_d_or_g();
    restore(v2);
    const int v3 = mark();
    post_process_last_consonants();
    restore(v3);
    cursor_ = limit_backward_;
    return true;
  }

  std::u32string s_;
  int cursor_ = 0;
  int limit_ = 0;
  int limit_backward_ = 0;
  int bra_ = 0;
  int ket_ = 0;
  bool continue_stemming_noun_suffixes_ = false;
  bool failed_ = false;
};

}  // namespace

std::string stem(std::string_view word) {
  if (word.empty()) return {};
  return utf8_encode(TurkishStemmer(utf8_decode(word)).run());
}

}  // namespace polarembed::textprep

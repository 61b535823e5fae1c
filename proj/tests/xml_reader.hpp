#pragma once

// Minimal XML reader for tests: checks well-formedness of the subset the
// renderer emits (declaration, elements, attributes, text, comments) and
// collects every element with its attributes.

#include <cctype>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xml {

struct Element {
    std::string name;
    std::map<std::string, std::string> attributes;
    std::size_t depth = 0;
};

struct Document {
    std::vector<Element> elements;  ///< in document order

    std::size_t count(std::string_view name) const {
        std::size_t n = 0;
        for (const auto& e : elements) {
            n += e.name == name;
        }
        return n;
    }

    std::size_t count(std::string_view name, std::string_view attr, std::string_view value) const {
        std::size_t n = 0;
        for (const auto& e : elements) {
            const auto it = e.attributes.find(std::string(attr));
            n += e.name == name && it != e.attributes.end() && it->second == value;
        }
        return n;
    }
};

class Reader {
public:
    explicit Reader(std::string_view text) : s_(text) {}

    Document parse() {
        Document doc;
        if (s_.substr(0, 5) == "<?xml") {
            const auto end = s_.find("?>");
            expect(end != std::string_view::npos, "unterminated declaration");
            pos_ = end + 2;
        }
        skip_misc();
        expect(peek() == '<', "expected root element");
        element(doc, 0);
        skip_misc();
        expect(pos_ == s_.size(), "content after root element");
        return doc;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("xml: " + what + " at offset " + std::to_string(pos_));
    }
    void expect(bool ok, const std::string& what) const {
        if (!ok) {
            fail(what);
        }
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    bool starts(std::string_view t) const { return s_.substr(pos_, t.size()) == t; }

    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    void skip_misc() {
        for (;;) {
            skip_space();
            if (starts("<!--")) {
                const auto end = s_.find("-->", pos_);
                expect(end != std::string_view::npos, "unterminated comment");
                pos_ = end + 3;
            } else {
                return;
            }
        }
    }

    std::string name() {
        const std::size_t start = pos_;
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '.') {
                ++pos_;
            } else {
                break;
            }
        }
        expect(pos_ > start && !std::isdigit(static_cast<unsigned char>(s_[start])), "expected a name");
        return std::string(s_.substr(start, pos_ - start));
    }

    void check_text(std::string_view text) const {
        for (std::size_t i = 0; i < text.size(); ++i) {
            expect(text[i] != '<', "raw '<' in text");
            if (text[i] == '&') {
                const auto semi = text.find(';', i);
                expect(semi != std::string_view::npos, "unterminated entity");
                const auto entity = text.substr(i + 1, semi - i - 1);
                expect(entity == "amp" || entity == "lt" || entity == "gt" || entity == "quot" || entity == "apos" ||
                           (!entity.empty() && entity[0] == '#'),
                       "unknown entity");
            }
        }
    }

    void element(Document& doc, std::size_t depth) {
        expect(peek() == '<', "expected '<'");
        ++pos_;
        Element e;
        e.name = name();
        e.depth = depth;
        for (;;) {
            skip_space();
            if (starts("/>")) {
                pos_ += 2;
                doc.elements.push_back(std::move(e));
                return;
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            const auto key = name();
            skip_space();
            expect(peek() == '=', "expected '='");
            ++pos_;
            skip_space();
            const char quote = peek();
            expect(quote == '"' || quote == '\'', "expected a quoted value");
            const auto end = s_.find(quote, pos_ + 1);
            expect(end != std::string_view::npos, "unterminated attribute");
            const auto value = s_.substr(pos_ + 1, end - pos_ - 1);
            check_text(value);
            expect(e.attributes.emplace(key, std::string(value)).second, "duplicate attribute " + key);
            pos_ = end + 1;
        }
        const std::string open = e.name;
        doc.elements.push_back(std::move(e));
        for (;;) {
            const auto next = s_.find('<', pos_);
            expect(next != std::string_view::npos, "unterminated element " + open);
            check_text(s_.substr(pos_, next - pos_));
            pos_ = next;
            if (starts("</")) {
                pos_ += 2;
                expect(name() == open, "mismatched closing tag for " + open);
                skip_space();
                expect(peek() == '>', "expected '>'");
                ++pos_;
                return;
            }
            if (starts("<!--")) {
                skip_misc();
                continue;
            }
            element(doc, depth + 1);
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

inline Document parse(std::string_view text) { return Reader(text).parse(); }

}  // namespace xml

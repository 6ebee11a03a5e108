#ifndef CLUSTERFORGE_TOOLS_REPORT_HPP
#define CLUSTERFORGE_TOOLS_REPORT_HPP

#include <cstdio>
#include <string>
#include <vector>

// Deterministic JSON emitter: keys keep insertion order, floats print with
// 17 significant digits, so identical inputs give byte-identical reports.
class JsonReport {
public:
    JsonReport() { stack_.push_back(State{false, true}); out_ += "{"; }

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    JsonReport& field(const std::string& key, double v) { return raw(key, num(v)); }
    JsonReport& field(const std::string& key, int v) { return raw(key, std::to_string(v)); }
    JsonReport& field(const std::string& key, long long v) { return raw(key, std::to_string(v)); }
    JsonReport& field(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
    JsonReport& field(const std::string& key, const std::string& v) {
        return raw(key, quote(v));
    }
    JsonReport& field(const std::string& key, const char* v) {
        return raw(key, quote(v));
    }
    JsonReport& field(const std::string& key, const std::vector<double>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += num(v[i]);
        }
        s += "]";
        return raw(key, s);
    }

    JsonReport& object(const std::string& key) {
        comma();
        out_ += quote(key) + ":{";
        stack_.push_back(State{false, true});
        return *this;
    }
    JsonReport& close() {
        out_ += "}";
        stack_.pop_back();
        return *this;
    }

    std::string str() {
        while (!stack_.empty()) close();
        return out_ + "\n";
    }

private:
    struct State {
        bool has_field;
        bool is_object;
    };

    static std::string quote(const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out + "\"";
    }

    void comma() {
        if (stack_.back().has_field) out_ += ",";
        stack_.back().has_field = true;
    }

    JsonReport& raw(const std::string& key, const std::string& value) {
        comma();
        out_ += quote(key) + ":" + value;
        return *this;
    }

    std::string out_;
    std::vector<State> stack_;
};

#endif

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace stepwise::llm {

using PromptContext = std::map<std::string, std::string, std::less<>>;

// Substitutes every {name} in `text` from `context` in a single pass;
// substituted values are never rescanned. "{{" and "}}" are literal braces.
// Throws TemplateError naming the first unbound placeholder.
std::string render_template(std::string_view text, const PromptContext& context);

// Placeholder names used by `text`, in order of first appearance.
std::vector<std::string> template_placeholders(std::string_view text);

class TemplateStore {
public:
    // Store holding the built-in templates.
    TemplateStore();

    static const TemplateStore& builtin();

    // Built-ins overridden by every "<id>.txt" file found in `dir`.
    static TemplateStore from_directory(const std::string& dir);

    void set(std::string id, std::string text);
    bool contains(std::string_view id) const;
    const std::string& text(std::string_view id) const;
    std::vector<std::string> ids() const;

    std::string render(std::string_view id, const PromptContext& context) const;

private:
    std::map<std::string, std::string, std::less<>> templates_;
};

// Convenience over the built-in store.
std::string render_prompt(std::string_view template_id, const PromptContext& context);

// Appended to a prompt when the previous reply could not be parsed.
std::string format_reminder(std::string_view error);

}  // namespace stepwise::llm

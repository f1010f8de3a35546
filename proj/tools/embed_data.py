#!/usr/bin/env python3
# Regenerates include/omni/prompt_data.hpp from data/prompts/*.txt.
import pathlib

root = pathlib.Path(__file__).resolve().parent.parent
names = ["crafter_moi", "crafter_moi_synonyms", "babyai_moi", "kitchen_propose", "kitchen_translate"]
out = ["#pragma once", "", "// Generated by tools/embed_data.py from data/prompts. Do not edit.", "",
       "namespace omni::prompt_data {", ""]
for n in names:
    text = (root / "data" / "prompts" / f"{n}.txt").read_text(encoding="utf-8")
    assert ")omni\"" not in text
    out.append(f'inline constexpr const char* {n} = R"omni({text})omni";')
    out.append("")
out.append("}  // namespace omni::prompt_data")
(root / "include" / "omni" / "prompt_data.hpp").write_text("\n".join(out) + "\n", encoding="utf-8")

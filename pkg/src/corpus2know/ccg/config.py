from dataclasses import dataclass, fields, replace

EXTENSIONS = (
    "modals", "adjective_stacking", "fronted_pp", "particles", "complementizer",
    "final_adverb", "noun_coordination", "gerund_as_noun", "verbless_template",
)


@dataclass(frozen=True)
class GrammarConfig:
    """Grammar extension toggles plus resource bounds for the chart."""

    modals: bool = True
    adjective_stacking: bool = True
    fronted_pp: bool = True
    particles: bool = True
    complementizer: bool = True
    final_adverb: bool = True
    noun_coordination: bool = True
    gerund_as_noun: bool = True
    verbless_template: bool = True
    max_chart_size: int = 200_000
    max_derivations: int = 64

    @classmethod
    def baseline(cls, **kw):
        """Every extension switched off."""
        return cls(**{name: False for name in EXTENSIONS}, **kw)

    @classmethod
    def only(cls, *names, **kw):
        unknown = set(names) - set(EXTENSIONS)
        if unknown:
            raise ValueError(f"unknown grammar extension(s): {', '.join(sorted(unknown))}")
        return replace(cls.baseline(**kw), **{n: True for n in names})

    def enabled(self):
        return tuple(n for n in EXTENSIONS if getattr(self, n))

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

"""Line-oriented job files describing groups, maps and tasks.

A job file is a sequence of directives, one per line.  ``#`` starts a
comment and blank lines are ignored.  Three block kinds exist:

    group <name>
      gens <g1> <g2> ...
      rel <word>            # repeatable; words use the gens
      perm <cycles> [n]     # one per generator; makes the group concrete

    map <name> <src> -> <dst>
      img <word>            # one per generator of <src>, in gens of <dst>

    task <kind> key=value ... [verify]

Task kinds and their keys:

    simples  group= p=
    h2       group= p= [module=<index>|all]
    cover    group= p= module=<index> [e=]
    lift     map= p= [module=<index>|all]
    iterate  map= p= [rounds=] [maxdim=] [seed=]

A group with ``perm`` lines is completed to a confluent rewriting system
and can serve as the target of a map or the base of a task.  A group
without them is treated as a presentation only (the source of a map).
"""

from dataclasses import dataclass, field

from .groups import (FiniteGroupData, Presentation, parse_perm, parse_word)


class JobParseError(Exception):
    """Raised with a line number when a job file cannot be parsed."""

    def __init__(self, lineno, msg):
        super().__init__("line %d: %s" % (lineno, msg))
        self.lineno = lineno


@dataclass
class GroupDef:
    name: str
    gens: tuple = ()
    relator_texts: list = field(default_factory=list)
    perm_texts: list = field(default_factory=list)

    def presentation(self):
        return Presentation.parse(self.gens, tuple(self.relator_texts))

    def concrete(self):
        if not self.perm_texts:
            raise ValueError("group %r has no perm lines" % self.name)
        if len(self.perm_texts) != len(self.gens):
            raise ValueError("group %r: %d perm lines for %d generators"
                             % (self.name, len(self.perm_texts),
                                len(self.gens)))
        npoints = max((n for _, n in self.perm_texts if n), default=None)
        perms = []
        for text, n in self.perm_texts:
            perms.append(parse_perm(text, n or npoints))
        width = max(len(p) for p in perms)
        perms = [p + tuple(range(len(p), width)) for p in perms]
        return FiniteGroupData(self.presentation(), tuple(perms))


@dataclass
class MapDef:
    name: str
    src: str
    dst: str
    image_texts: list = field(default_factory=list)


@dataclass
class TaskDef:
    kind: str
    options: dict
    lineno: int


@dataclass
class Job:
    groups: dict
    maps: dict
    tasks: list


TASK_KINDS = ("simples", "h2", "cover", "lift", "iterate")


def _parse_options(parts, lineno):
    opts = {}
    for part in parts:
        if part == "verify":
            opts["verify"] = "1"
            continue
        if "=" not in part:
            raise JobParseError(lineno, "expected key=value, got %r" % part)
        key, _, value = part.partition("=")
        if not key or not value:
            raise JobParseError(lineno, "malformed option %r" % part)
        opts[key] = value
    return opts


def parse_job(text):
    """Parse job file text into a Job of group/map definitions and tasks."""
    groups, maps, tasks = {}, {}, []
    block = None  # current GroupDef or MapDef
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if head == "group":
            if len(parts) != 2:
                raise JobParseError(lineno, "usage: group <name>")
            name = parts[1]
            if name in groups:
                raise JobParseError(lineno, "duplicate group %r" % name)
            block = GroupDef(name)
            groups[name] = block
        elif head == "gens":
            if not isinstance(block, GroupDef):
                raise JobParseError(lineno, "gens outside a group block")
            if block.gens:
                raise JobParseError(lineno, "gens given twice")
            if len(parts) < 2:
                raise JobParseError(lineno, "gens needs at least one name")
            block.gens = tuple(parts[1:])
        elif head == "rel":
            if not isinstance(block, GroupDef):
                raise JobParseError(lineno, "rel outside a group block")
            if len(parts) != 2:
                raise JobParseError(lineno, "usage: rel <word>")
            block.relator_texts.append(parts[1])
        elif head == "perm":
            if not isinstance(block, GroupDef):
                raise JobParseError(lineno, "perm outside a group block")
            if len(parts) not in (2, 3):
                raise JobParseError(lineno, "usage: perm <cycles> [npoints]")
            npoints = None
            if len(parts) == 3:
                try:
                    npoints = int(parts[2])
                except ValueError:
                    raise JobParseError(lineno, "bad point count %r"
                                        % parts[2])
            block.perm_texts.append((parts[1], npoints))
        elif head == "map":
            if len(parts) != 5 or parts[3] != "->":
                raise JobParseError(lineno, "usage: map <name> <src> -> <dst>")
            name = parts[1]
            if name in maps:
                raise JobParseError(lineno, "duplicate map %r" % name)
            for g in (parts[2], parts[4]):
                if g not in groups:
                    raise JobParseError(lineno, "unknown group %r" % g)
            block = MapDef(name, parts[2], parts[4])
            maps[name] = block
        elif head == "img":
            if not isinstance(block, MapDef):
                raise JobParseError(lineno, "img outside a map block")
            if len(parts) != 2:
                raise JobParseError(lineno, "usage: img <word>")
            block.image_texts.append(parts[1])
        elif head == "task":
            if len(parts) < 2:
                raise JobParseError(lineno, "usage: task <kind> key=value ...")
            kind = parts[1]
            if kind not in TASK_KINDS:
                raise JobParseError(lineno, "unknown task kind %r (one of %s)"
                                    % (kind, ", ".join(TASK_KINDS)))
            opts = _parse_options(parts[2:], lineno)
            tasks.append(TaskDef(kind, opts, lineno))
            block = None
        else:
            raise JobParseError(lineno, "unknown directive %r" % head)
    job = Job(groups, maps, tasks)
    _validate(job)
    return job


def _validate(job):
    for m in job.maps.values():
        src = job.groups[m.src]
        if len(m.image_texts) != len(src.gens):
            raise JobParseError(0, "map %r: %d img lines for %d generators"
                                % (m.name, len(m.image_texts),
                                   len(src.gens)))
    if not job.tasks:
        raise JobParseError(0, "job file contains no task")
    for t in job.tasks:
        needs = {"simples": ("group", "p"), "h2": ("group", "p"),
                 "cover": ("group", "p", "module"),
                 "lift": ("map", "p"), "iterate": ("map", "p")}[t.kind]
        for key in needs:
            if key not in t.options:
                raise JobParseError(t.lineno, "task %s requires %s="
                                    % (t.kind, key))
        if "group" in t.options and t.options["group"] not in job.groups:
            raise JobParseError(t.lineno, "unknown group %r"
                                % t.options["group"])
        if "map" in t.options and t.options["map"] not in job.maps:
            raise JobParseError(t.lineno, "unknown map %r" % t.options["map"])
        for key in ("p", "e", "rounds", "maxdim"):
            if key in t.options:
                try:
                    if int(t.options[key]) <= 0:
                        raise ValueError
                except ValueError:
                    raise JobParseError(t.lineno, "%s= must be a positive "
                                        "integer" % key)


def image_words(job, mapdef):
    """Free-group words for a map's generator images, in the dst alphabet."""
    dst = job.groups[mapdef.dst]
    return [parse_word(t, dst.gens) for t in mapdef.image_texts]

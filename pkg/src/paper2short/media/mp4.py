"""Self-contained MP4 writer/reader used by the built-in encoder.

Video is stored as one JPEG per frame ('jpeg' sample entry) and audio as
16-bit little-endian PCM ('sowt'), both QuickTime-compatible codecs that
need no external encoder. The reader walks the box tree and recovers
per-track durations and raw samples, which is what duration checks and
frame inspection in tests rely on.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field

from ..errors import MuxFailure

_CONTAINERS = {b"moov", b"trak", b"mdia", b"minf", b"stbl", b"dinf", b"edts"}


def _box(kind: bytes, payload: bytes) -> bytes:
    return struct.pack(">I", 8 + len(payload)) + kind + payload


def _full(kind: bytes, version: int, flags: int, payload: bytes) -> bytes:
    return _box(kind, struct.pack(">B3s", version, flags.to_bytes(3, "big")) + payload)


def _matrix() -> bytes:
    return struct.pack(">9i", 0x10000, 0, 0, 0, 0x10000, 0, 0, 0, 0x40000000)


MOVIE_TIMESCALE = 600


def write_mp4(
    frames: list[bytes],
    fps: int,
    width: int,
    height: int,
    audio_pcm: bytes | None = None,
    sample_rate: int = 24000,
) -> bytes:
    """Mux JPEG frames and optional mono s16le PCM into one MP4 blob."""
    if not frames:
        raise MuxFailure("no frames to mux")
    if audio_pcm is not None and len(audio_pcm) % 2:
        raise MuxFailure("PCM payload must be 16-bit aligned")

    ftyp = _box(b"ftyp", b"qt  " + struct.pack(">I", 0) + b"qt  ")
    # store each distinct frame payload once; repeated frames (common with
    # static footage) just point at the same mdat bytes
    video_base = len(ftyp) + 8  # first payload byte inside mdat
    unique: list[bytes] = []
    offset_of: dict[bytes, int] = {}
    cursor = video_base
    frame_offsets: list[int] = []
    for f in frames:
        off = offset_of.get(f)
        if off is None:
            off = cursor
            offset_of[f] = off
            unique.append(f)
            cursor += len(f)
        frame_offsets.append(off)
    mdat_payload = b"".join(unique) + (audio_pcm or b"")
    audio_base = cursor

    nframes = len(frames)
    video_dur_s = nframes / fps
    nsamples = len(audio_pcm) // 2 if audio_pcm else 0
    audio_dur_s = nsamples / sample_rate if audio_pcm else 0.0
    movie_dur = round(max(video_dur_s, audio_dur_s) * MOVIE_TIMESCALE)

    mvhd = _full(b"mvhd", 0, 0, struct.pack(
        ">IIIIIhH8s", 0, 0, MOVIE_TIMESCALE, movie_dur, 0x00010000, 0x0100, 0, b"\0" * 8,
    ) + _matrix() + struct.pack(">6I", 0, 0, 0, 0, 0, 0) + struct.pack(">I", 3))

    traks = [_video_trak(frames, fps, width, height, movie_dur, frame_offsets)]
    if audio_pcm:
        traks.append(_audio_trak(nsamples, sample_rate, movie_dur, audio_base))

    moov = _box(b"moov", mvhd + b"".join(traks))
    return ftyp + _box(b"mdat", mdat_payload) + moov


def _tkhd(track_id: int, duration: int, width: int, height: int, volume: int) -> bytes:
    return _full(b"tkhd", 0, 7, struct.pack(
        ">IIIII", 0, 0, track_id, 0, duration,
    ) + struct.pack(">IIhhhH", 0, 0, 0, 0, volume, 0) + _matrix() + struct.pack(
        ">II", width << 16, height << 16))


def _dinf() -> bytes:
    url = _full(b"url ", 0, 1, b"")
    return _box(b"dinf", _full(b"dref", 0, 0, struct.pack(">I", 1) + url))


def _stbl(stsd_entry: bytes, sample_count: int, sample_sizes: list[int] | int,
          chunk_offsets: list[int] | int) -> bytes:
    stsd = _full(b"stsd", 0, 0, struct.pack(">I", 1) + stsd_entry)
    stts = _full(b"stts", 0, 0, struct.pack(">III", 1, sample_count, 1))
    if isinstance(sample_sizes, int):
        stsz = _full(b"stsz", 0, 0, struct.pack(">II", sample_sizes, sample_count))
    else:
        stsz = _full(b"stsz", 0, 0, struct.pack(">II", 0, sample_count)
                     + struct.pack(">%dI" % sample_count, *sample_sizes))
    if isinstance(chunk_offsets, int):
        # one chunk holding every sample back to back
        stsc = _full(b"stsc", 0, 0, struct.pack(">IIII", 1, 1, sample_count, 1))
        stco = _full(b"stco", 0, 0, struct.pack(">II", 1, chunk_offsets))
    else:
        # one chunk per sample: offsets may repeat, letting identical
        # samples share mdat bytes
        stsc = _full(b"stsc", 0, 0, struct.pack(">IIII", 1, 1, 1, 1))
        stco = _full(b"stco", 0, 0, struct.pack(">I", len(chunk_offsets))
                     + struct.pack(">%dI" % len(chunk_offsets), *chunk_offsets))
    return _box(b"stbl", stsd + stts + stsc + stsz + stco)


def _video_trak(frames: list[bytes], fps: int, width: int, height: int,
                movie_dur: int, frame_offsets: list[int]) -> bytes:
    nframes = len(frames)
    tkhd = _tkhd(1, movie_dur, width, height, 0)
    mdhd = _full(b"mdhd", 0, 0, struct.pack(">IIIIHH", 0, 0, fps, nframes, 0x55C4, 0))
    hdlr = _full(b"hdlr", 0, 0, struct.pack(">4s4s3I", b"\0" * 4, b"vide", 0, 0, 0) + b"video\0")
    entry = (struct.pack(">6xH", 1)  # SampleEntry header, data_ref_index
             + struct.pack(">HH12x", 0, 0)
             + struct.pack(">HHII", width, height, 0x00480000, 0x00480000)
             + struct.pack(">IH", 0, 1)
             + b"\x04jpeg" + b"\0" * 27
             + struct.pack(">Hh", 24, -1))
    stsd_entry = struct.pack(">I4s", 8 + len(entry), b"jpeg") + entry
    vmhd = _full(b"vmhd", 0, 1, struct.pack(">HHHH", 0, 0, 0, 0))
    stbl = _stbl(stsd_entry, nframes, [len(f) for f in frames], frame_offsets)
    minf = _box(b"minf", vmhd + _dinf() + stbl)
    mdia = _box(b"mdia", mdhd + hdlr + minf)
    return _box(b"trak", tkhd + mdia)


def _audio_trak(nsamples: int, sample_rate: int, movie_dur: int, base_offset: int) -> bytes:
    tkhd = _tkhd(2, movie_dur, 0, 0, 0x0100)
    mdhd = _full(b"mdhd", 0, 0, struct.pack(">IIIIHH", 0, 0, sample_rate, nsamples, 0x55C4, 0))
    hdlr = _full(b"hdlr", 0, 0, struct.pack(">4s4s3I", b"\0" * 4, b"soun", 0, 0, 0) + b"sound\0")
    entry = (struct.pack(">6xH", 1)
             + struct.pack(">HH", 1, 0)  # version 1 QT audio entry
             + struct.pack(">I", 0)
             + struct.pack(">HHHHI", 1, 16, 0, 0, sample_rate << 16)
             + struct.pack(">4I", 1, 2, 2, 2))  # samples/pkt, bytes/pkt, bytes/frame, bytes/sample
    stsd_entry = struct.pack(">I4s", 8 + len(entry), b"sowt") + entry
    smhd = _full(b"smhd", 0, 0, struct.pack(">HH", 0, 0))
    stbl = _stbl(stsd_entry, nsamples, 2, base_offset)
    minf = _box(b"minf", smhd + _dinf() + stbl)
    mdia = _box(b"mdia", mdhd + hdlr + minf)
    return _box(b"trak", tkhd + mdia)


# ---------------------------------------------------------------------------
# reading


@dataclass
class Track:
    kind: str  # "video" | "audio"
    codec: str
    timescale: int
    media_duration: int
    width: int = 0
    height: int = 0
    sample_rate: int = 0
    channels: int = 0
    sample_sizes: list[int] = field(default_factory=list)
    chunk_offsets: list[int] = field(default_factory=list)
    stsc_runs: list[tuple[int, int]] = field(default_factory=list)  # (first_chunk, per_chunk)

    @property
    def duration_s(self) -> float:
        return self.media_duration / self.timescale if self.timescale else 0.0

    def sample_locations(self) -> list[tuple[int, int]]:
        """(absolute_offset, size) per sample, in order."""
        out: list[tuple[int, int]] = []
        nchunks = len(self.chunk_offsets)
        runs = list(self.stsc_runs)
        sample_i = 0
        for ci in range(nchunks):
            per_chunk = 0
            for (first, per) in runs:
                if ci + 1 >= first:
                    per_chunk = per
            off = self.chunk_offsets[ci]
            for _ in range(per_chunk):
                if sample_i >= len(self.sample_sizes):
                    break
                size = self.sample_sizes[sample_i]
                out.append((off, size))
                off += size
                sample_i += 1
        return out


def _iter_boxes(buf: bytes, start: int, end: int):
    pos = start
    while pos + 8 <= end:
        size = struct.unpack_from(">I", buf, pos)[0]
        kind = buf[pos + 4:pos + 8]
        if size == 1:
            size = struct.unpack_from(">Q", buf, pos + 8)[0]
            body = pos + 16
        elif size == 0:
            size = end - pos
            body = pos + 8
        else:
            body = pos + 8
        if size < 8 or pos + size > end:
            break
        yield kind, body, pos + size
        pos += size


class Mp4File:
    """Parsed MP4; exposes per-track durations and raw samples."""

    def __init__(self, blob: bytes):
        self.blob = blob
        self.tracks: list[Track] = []
        self.movie_timescale = MOVIE_TIMESCALE
        self.movie_duration = 0
        self._parse()

    def _parse(self):
        for kind, body, end in _iter_boxes(self.blob, 0, len(self.blob)):
            if kind == b"moov":
                self._parse_moov(body, end)
        if not self.tracks:
            raise MuxFailure("no tracks found in container")

    def _parse_moov(self, start: int, end: int):
        for kind, body, bend in _iter_boxes(self.blob, start, end):
            if kind == b"mvhd":
                version = self.blob[body]
                off = body + 4 + (16 if version else 8)
                self.movie_timescale, self.movie_duration = struct.unpack_from(
                    ">II", self.blob, off)
            elif kind == b"trak":
                track = self._parse_trak(body, bend)
                if track is not None:
                    self.tracks.append(track)

    def _find(self, path: list[bytes], start: int, end: int):
        if not path:
            return start, end
        for kind, body, bend in _iter_boxes(self.blob, start, end):
            if kind == path[0]:
                return self._find(path[1:], body, bend)
        return None

    def _parse_trak(self, start: int, end: int) -> Track | None:
        mdia = self._find([b"mdia"], start, end)
        if mdia is None:
            return None
        handler = ""
        timescale = media_dur = 0
        for kind, body, bend in _iter_boxes(self.blob, *mdia):
            if kind == b"mdhd":
                version = self.blob[body]
                off = body + 4 + (16 if version else 8)
                timescale, media_dur = struct.unpack_from(">II", self.blob, off)
            elif kind == b"hdlr":
                handler = self.blob[body + 8:body + 12].decode("latin-1")
        stbl = self._find([b"minf", b"stbl"], *mdia)
        if stbl is None:
            return None
        track = Track(
            kind="video" if handler == "vide" else "audio" if handler == "soun" else handler,
            codec="", timescale=timescale, media_duration=media_dur)
        for kind, body, bend in _iter_boxes(self.blob, *stbl):
            if kind == b"stsd":
                self._parse_stsd(track, body, bend)
            elif kind == b"stsz":
                fixed, count = struct.unpack_from(">II", self.blob, body + 4)
                if fixed:
                    track.sample_sizes = [fixed] * count
                else:
                    track.sample_sizes = list(struct.unpack_from(
                        ">%dI" % count, self.blob, body + 12))
            elif kind == b"stco":
                count = struct.unpack_from(">I", self.blob, body + 4)[0]
                track.chunk_offsets = list(struct.unpack_from(
                    ">%dI" % count, self.blob, body + 8))
            elif kind == b"stsc":
                count = struct.unpack_from(">I", self.blob, body + 4)[0]
                for i in range(count):
                    first, per, _desc = struct.unpack_from(
                        ">III", self.blob, body + 8 + 12 * i)
                    track.stsc_runs.append((first, per))
        return track

    def _parse_stsd(self, track: Track, start: int, end: int):
        entry_start = start + 8
        if entry_start + 8 > end:
            return
        track.codec = self.blob[entry_start + 4:entry_start + 8].decode("latin-1")
        if track.kind == "video":
            track.width, track.height = struct.unpack_from(
                ">HH", self.blob, entry_start + 8 + 16 + 8)
        elif track.kind == "audio":
            version = struct.unpack_from(">H", self.blob, entry_start + 16)[0]
            track.channels, bits = struct.unpack_from(">HH", self.blob, entry_start + 24)
            track.sample_rate = struct.unpack_from(">I", self.blob, entry_start + 32)[0] >> 16
            del version, bits

    # -- convenience --

    @property
    def duration_s(self) -> float:
        if self.movie_timescale:
            return self.movie_duration / self.movie_timescale
        return max((t.duration_s for t in self.tracks), default=0.0)

    def video_track(self) -> Track | None:
        return next((t for t in self.tracks if t.kind == "video"), None)

    def audio_track(self) -> Track | None:
        return next((t for t in self.tracks if t.kind == "audio"), None)

    def video_frames(self) -> list[bytes]:
        track = self.video_track()
        if track is None:
            return []
        return [self.blob[off:off + size] for off, size in track.sample_locations()]

    def video_frame(self, index: int) -> bytes:
        track = self.video_track()
        if track is None:
            raise MuxFailure("no video track")
        locs = track.sample_locations()
        off, size = locs[index]
        return self.blob[off:off + size]

    def audio_pcm(self) -> bytes:
        track = self.audio_track()
        if track is None:
            return b""
        return b"".join(self.blob[off:off + size] for off, size in track.sample_locations())


def concat_mp4(blobs: list[bytes]) -> bytes:
    """Concatenate MP4 inputs produced by :func:`write_mp4`.

    All inputs must share frame rate, geometry and audio sample rate;
    JPEG frames and PCM are carried through untouched, so the output is
    deterministic given the inputs.
    """
    if not blobs:
        raise MuxFailure("nothing to concatenate")
    frames: list[bytes] = []
    pcm = bytearray()
    fps = width = height = rate = None
    for blob in blobs:
        f = Mp4File(blob)
        vt = f.video_track()
        if vt is None:
            raise MuxFailure("input without a video track")
        if fps is None:
            fps, width, height = vt.timescale, vt.width, vt.height
        elif (vt.timescale, vt.width, vt.height) != (fps, width, height):
            raise MuxFailure("mismatched video parameters across inputs")
        clip_frames = f.video_frames()
        frames.extend(clip_frames)
        at = f.audio_track()
        clip_pcm = f.audio_pcm()
        if at is not None:
            if rate is None:
                rate = at.sample_rate
            elif at.sample_rate != rate:
                raise MuxFailure("mismatched audio sample rates")
        # keep A/V sync: pad audio of each clip to its video duration
        target = round(len(clip_frames) / fps * (rate or 24000)) * 2
        if len(clip_pcm) < target:
            clip_pcm = clip_pcm + b"\0" * (target - len(clip_pcm))
        else:
            clip_pcm = clip_pcm[:target]
        pcm.extend(clip_pcm)
    return write_mp4(frames, fps, width, height, bytes(pcm), rate or 24000)

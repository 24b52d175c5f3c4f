#!/usr/bin/env python3
"""Generate the checked-in Pegasus DAX fixture workflows under data/workflows/.

The five workflow families follow the published structure of the Pegasus
workflow-generator applications (CyberShake, Epigenomics, LIGO Inspiral,
Montage, SIPHT). Output is deterministic; rerunning rewrites identical files.

    python3 tools/fixtures/generate_workflows.py [--out data/workflows]
"""

import argparse
import itertools
import pathlib
import random
from xml.sax.saxutils import quoteattr

GB = 10**9
TB = 10**12


class Builder:
    def __init__(self, name, seed):
        self.name = name
        self.rng = random.Random(seed)
        self.jobs = []  # (id, name, inputs, outputs)
        self.sizes = {}

    def file(self, name, lo_gb, hi_gb):
        if name not in self.sizes:
            self.sizes[name] = int(self.rng.uniform(lo_gb, hi_gb) * GB)
        return name

    def job(self, name, inputs, outputs):
        jid = "ID%05d" % len(self.jobs)
        self.jobs.append((jid, name, list(inputs), list(outputs)))
        return jid

    def scale_total(self, total_bytes):
        current = sum(self.sizes.values())
        names = sorted(self.sizes)
        scaled = {n: self.sizes[n] * total_bytes // current for n in names}
        scaled[names[-1]] += total_bytes - sum(scaled.values())
        self.sizes = scaled

    def dataset_count(self):
        return len(self.sizes)

    def write(self, path):
        producers = {}
        for jid, _, _, outs in self.jobs:
            for f in outs:
                producers[f] = jid
        lines = ['<?xml version="1.0" encoding="UTF-8"?>',
                 '<adag xmlns="http://pegasus.isi.edu/schema/DAX" version="3.6" '
                 'name=%s jobCount="%d" fileCount="0" childCount="0">'
                 % (quoteattr(self.name), len(self.jobs))]
        for jid, name, ins, outs in self.jobs:
            lines.append('  <job id="%s" namespace="%s" name="%s" version="1.0">'
                         % (jid, self.name.split("_")[0], name))
            for f in ins:
                lines.append('    <uses file=%s link="input" register="false" '
                             'transfer="true" size="%d"/>' % (quoteattr(f), self.sizes[f]))
            for f in outs:
                lines.append('    <uses file=%s link="output" register="false" '
                             'transfer="false" size="%d"/>' % (quoteattr(f), self.sizes[f]))
            lines.append('  </job>')
        parents = {}
        for jid, _, ins, _ in self.jobs:
            ps = sorted({producers[f] for f in ins if f in producers})
            if ps:
                parents[jid] = ps
        for child in sorted(parents):
            lines.append('  <child ref="%s">' % child)
            for p in parents[child]:
                lines.append('    <parent ref="%s"/>' % p)
            lines.append('  </child>')
        lines.append('</adag>')
        path.write_text("\n".join(lines) + "\n")


def ligo(name, groups, shared_veto, total_bytes, seed):
    """groups: list of (ifo_count, has_cache)."""
    b = Builder(name, seed)
    veto = b.file("veto_segments.xml", 1, 2) if shared_veto else None
    for g, (k, cache) in enumerate(groups):
        frames = [b.file("g%d_frame_%d.gwf" % (g, i), 60, 90) for i in range(k)]
        cache_file = b.file("g%d_frames.cache" % g, 0.5, 1) if cache else None
        banks, insps = [], []
        for i in range(k):
            bank = b.file("g%d_tmpltbank_%d.xml" % (g, i), 20, 40)
            ins = [frames[i]] + ([cache_file] if cache_file else [])
            b.job("TmpltBank", ins, [bank])
            banks.append(bank)
        for i in range(k):
            insp = b.file("g%d_inspiral_%d.xml" % (g, i), 30, 60)
            b.job("Inspiral", [frames[i], banks[i]], [insp])
            insps.append(insp)
        thinca = b.file("g%d_thinca.xml" % g, 40, 70)
        b.job("Thinca", insps + ([veto] if veto else []), [thinca])
        insp2s = []
        for i in range(k):
            trig = b.file("g%d_trigbank_%d.xml" % (g, i), 10, 20)
            b.job("TrigBank", [thinca], [trig])
            insp2 = b.file("g%d_inspiral2_%d.xml" % (g, i), 30, 60)
            b.job("Inspiral", [frames[i], trig], [insp2])
            insp2s.append(insp2)
        thinca2 = b.file("g%d_thinca2.xml" % g, 40, 70)
        b.job("Thinca", insp2s + ([veto] if veto else []), [thinca2])
    b.scale_total(total_bytes)
    return b


def ligo_groups(target_datasets, approx_tasks):
    """Pick group layouts with exactly target_datasets files, close to approx_tasks jobs."""
    best = None
    for k in range(2, 7):
        per = 5 * k + 2
        tasks_per = 4 * k + 2
        for groups in range(1, target_datasets // per + 1):
            for caches in range(groups + 1):
                for veto in (0, 1):
                    if groups * per + caches + veto != target_datasets:
                        continue
                    tasks = groups * tasks_per
                    score = abs(tasks - approx_tasks)
                    layout = [(k, i < caches) for i in range(groups)]
                    if best is None or score < best[0]:
                        best = (score, layout, bool(veto))
    if best is None:
        # mix two ifo counts
        for k1, k2 in itertools.combinations(range(2, 7), 2):
            p1, p2 = 5 * k1 + 2, 5 * k2 + 2
            for n1 in range(target_datasets // p1 + 1):
                rest = target_datasets - n1 * p1
                for n2 in range(rest // p2 + 1):
                    extra = rest - n2 * p2
                    groups = n1 + n2
                    for veto in (0, 1):
                        caches = extra - veto
                        if caches < 0 or caches > groups:
                            continue
                        tasks = n1 * (4 * k1 + 2) + n2 * (4 * k2 + 2)
                        score = abs(tasks - approx_tasks)
                        layout = [(k1, False)] * n1 + [(k2, False)] * n2
                        layout = [(k, i < caches) for i, (k, _) in enumerate(layout)]
                        if best is None or score < best[0]:
                            best = (score, layout, bool(veto))
    return best[1], best[2]


def epigenomics(name, lanes, chains_per_lane, seed):
    b = Builder(name, seed)
    ref = b.file("chr21.BS.bfa", 30, 40)
    lane_maps = []
    for lane in range(lanes):
        fastq = b.file("lane%d.fastq" % lane, 40, 60)
        chunks = [b.file("lane%d.chunk%d.sfq" % (lane, c), 4, 6) for c in range(chains_per_lane)]
        b.job("fastQSplit", [fastq], chunks)
        maps = []
        for c, chunk in enumerate(chunks):
            tag = "lane%d.chunk%d" % (lane, c)
            nocont = b.file(tag + ".nocontam.sfq", 4, 6)
            b.job("filterContams", [chunk], [nocont])
            fq = b.file(tag + ".fq", 4, 6)
            b.job("sol2sanger", [nocont], [fq])
            bfq = b.file(tag + ".bfq", 2, 3)
            b.job("fast2bfq", [fq], [bfq])
            mp = b.file(tag + ".map", 3, 5)
            unmapped = b.file(tag + ".unmapped.fq", 1, 2)
            log = b.file(tag + ".map.log", 0.01, 0.05)
            b.job("map", [bfq, ref], [mp, unmapped, log])
            maps.append(mp)
        if lanes == 1:
            merged = b.file("chr21.merged.map", 20, 30)
            mlog = b.file("chr21.merged.log", 0.01, 0.05)
            b.job("mapMerge", maps, [merged, mlog])
            lane_maps = None
        else:
            lane_map = b.file("lane%d.map" % lane, 10, 15)
            b.job("mapMerge", maps, [lane_map])
            lane_maps.append(lane_map)
    if lane_maps is not None:
        merged = b.file("chr21.merged.map", 20, 30)
        mlog = b.file("chr21.merged.log", 0.01, 0.05)
        b.job("mapMerge", lane_maps, [merged, mlog])
    idx = b.file("chr21.map.idx", 5, 8)
    stats = b.file("chr21.map.stats", 0.01, 0.05)
    b.job("maqIndex", [merged], [idx, stats])
    outs = [b.file("chr21.pileup", 8, 12), b.file("chr21.snps", 0.5, 1),
            b.file("chr21.indels", 0.5, 1)]
    b.job("pileup", [merged, idx, ref], outs)
    return b


def cybershake(name, extracts, synth_per_extract, seed):
    b = Builder(name, seed)
    sgt = [b.file("site_SGT_x.sgt", 80, 100), b.file("site_SGT_y.sgt", 80, 100)]
    seis_all, peaks = [], []
    for e in range(extracts):
        sub = [b.file("rup%d_subsgt_x.sgt" % e, 10, 20), b.file("rup%d_subsgt_y.sgt" % e, 10, 20)]
        b.job("ExtractSGT", sgt, sub)
        for s in range(synth_per_extract):
            tag = "rup%d_var%d" % (e, s)
            rupvar = b.file(tag + ".txt", 0.5, 1)
            seis = b.file(tag + "_seismogram.grm", 1, 3)
            b.job("SeismogramSynthesis", sub + [rupvar], [seis])
            peak = b.file(tag + "_peakvals.bsa", 0.1, 0.3)
            b.job("PeakValCalcOkaya", [seis], [peak])
            seis_all.append(seis)
            peaks.append(peak)
    b.job("ZipSeis", seis_all, [b.file("seismograms.zip", 20, 40)])
    b.job("ZipPSA", peaks, [b.file("peakvals.zip", 2, 4)])
    return b


def montage(name, images, diff_count, seed):
    b = Builder(name, seed)
    hdr = b.file("region.hdr", 0.01, 0.02)
    pimages = b.file("pimages.tbl", 0.01, 0.02)
    proj, area = [], []
    for i in range(images):
        raw = b.file("raw_%d.fits" % i, 4, 6)
        p = b.file("proj_%d.fits" % i, 4, 6)
        a = b.file("proj_%d_area.fits" % i, 4, 6)
        b.job("mProjectPP", [raw, hdr], [p, a])
        proj.append(p)
        area.append(a)
    pairs = [(i, i + 1) for i in range(images - 1)] + \
        [(i, i + 2) for i in range(images - 2)] + [(i, i + 3) for i in range(images - 3)]
    fits = []
    for n, (i, j) in enumerate(pairs[:diff_count]):
        f = b.file("fit_%d_%d.txt" % (i, j), 0.05, 0.1)
        b.job("mDiffFit", [proj[i], proj[j], area[i], area[j], hdr], [f])
        fits.append(f)
    fits_tbl = b.file("fits.tbl", 0.05, 0.1)
    b.job("mConcatFit", fits, [fits_tbl])
    corrections = b.file("corrections.tbl", 0.01, 0.02)
    b.job("mBgModel", [fits_tbl, pimages], [corrections])
    corr = []
    for i in range(images):
        c = b.file("corr_%d.fits" % i, 4, 6)
        ca = b.file("corr_%d_area.fits" % i, 4, 6)
        b.job("mBackground", [proj[i], area[i], corrections], [c, ca])
        corr += [c, ca]
    cimages = b.file("cimages.tbl", 0.01, 0.02)
    b.job("mImgtbl", corr[0::2], [cimages])
    mosaic = b.file("mosaic.fits", 30, 40)
    mosaic_area = b.file("mosaic_area.fits", 30, 40)
    b.job("mAdd", corr + [cimages, hdr], [mosaic, mosaic_area])
    shrunk = b.file("shrunken.fits", 3, 5)
    b.job("mShrink", [mosaic], [shrunk])
    b.job("mJPEG", [shrunk], [b.file("mosaic.jpg", 0.5, 1)])
    return b


def sipht(name, patsers, seed):
    b = Builder(name, seed)
    # SIPHT files are of similar size
    lo, hi = 9, 11
    genome = b.file("genome.fna", lo, hi)
    ptt = b.file("genome.ptt", lo, hi)
    patser_outs = []
    for i in range(patsers):
        matrix = b.file("matrix_%d.txt" % i, lo, hi)
        out = b.file("patser_%d.out" % i, lo, hi)
        b.job("Patser", [matrix, genome], [out])
        patser_outs.append(out)
    patser_all = b.file("patser_concat.out", lo, hi)
    b.job("Patser_concate", patser_outs, [patser_all])
    tt = b.file("transterm.out", lo, hi)
    b.job("Transterm", [genome, ptt], [tt])
    ft = b.file("findterm.out", lo, hi)
    b.job("Findterm", [genome, ptt], [ft])
    desc = b.file("rnamotif.desc", lo, hi)
    rm = b.file("rnamotif.out", lo, hi)
    b.job("RNAMotif", [genome, desc], [rm])
    srna_db = b.file("known_srna.db", lo, hi)
    blast = b.file("blast.out", lo, hi)
    b.job("Blast", [genome, srna_db], [blast])
    srna_out = b.file("srna.out", lo, hi)
    srna_ffn = b.file("srna.ffn", lo, hi)
    b.job("SRNA", [patser_all, tt, ft, rm, blast, ptt], [srna_out, srna_ffn])
    parsed = b.file("srna.parsed.ffn", lo, hi)
    b.job("FFN_parse", [srna_out, srna_ffn], [parsed])
    results = []
    for job, extra in (("Blast_synteny", "synteny.db"), ("Blast_candidate", "candidate.db"),
                       ("Blast_paralogues", "paralogues.db")):
        db = b.file(extra, lo, hi)
        out = b.file(job.lower() + ".out", lo, hi)
        b.job(job, [srna_ffn, db], [out])
        results.append(out)
    qrna_db = b.file("qrna.db", lo, hi)
    qrna = b.file("blast_qrna.out", lo, hi)
    b.job("Blast_QRNA", [srna_ffn, parsed, qrna_db], [qrna])
    b.job("SRNA_annotate", [srna_out, parsed, qrna] + results,
          [b.file("srna_annotated.out", lo, hi)])
    return b


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parents[2] / "data" / "workflows"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    builders = []
    for scale, datasets, tasks, total, seed in (("small", 47, 30, 2.47, 11),
                                               ("medium", 77, 50, 4.08, 12),
                                               ("large", 1501, 1000, 82.21, 13)):
        layout, veto = ligo_groups(datasets, tasks)
        b = ligo("LIGO_" + scale, layout, veto, int(round(total * TB)), seed)
        assert b.dataset_count() == datasets, (scale, b.dataset_count())
        builders.append(b)
    builders += [epigenomics("Epigenomics_small", 1, 5, 21),
                 epigenomics("Epigenomics_medium", 3, 3, 22),
                 epigenomics("Epigenomics_large", 8, 31, 23),
                 cybershake("CyberShake_small", 2, 7, 31),
                 cybershake("CyberShake_medium", 4, 6, 32),
                 cybershake("CyberShake_large", 20, 25, 33),
                 montage("Montage_small", 6, 11, 41),
                 montage("Montage_medium", 10, 24, 42),
                 montage("Montage_large", 160, 470, 43),
                 sipht("SIPHT_small", 18, 51),
                 sipht("SIPHT_medium", 40, 52),
                 sipht("SIPHT_large", 960, 53)]
    for b in builders:
        b.write(out / (b.name + ".dax"))
        print("%-20s jobs=%5d files=%5d total=%.2f TB"
              % (b.name, len(b.jobs), b.dataset_count(), sum(b.sizes.values()) / TB))


if __name__ == "__main__":
    main()

# Plots results/success_rate_oracle.summary.csv (one panel per s).
import csv
import collections
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

rows = list(csv.DictReader(open('results/success_rate_oracle.summary.csv')))
panels = sorted({r['s'] for r in rows}, key=float)
fig, axes = plt.subplots(1, len(panels), figsize=(5 * len(panels), 4), squeeze=False)
for ax, panel in zip(axes[0], panels):
    lines = collections.defaultdict(list)
    for r in rows:
        if r['s'] == panel:
            lines[r['method']].append((float(r['m']), float(r['success_rate']), float(r['success_std'] or 0)))
    for method, pts in lines.items():
        pts.sort()
        ax.errorbar([p[0] for p in pts], [p[1] for p in pts], yerr=[p[2] for p in pts], marker='o', label=method)
    ax.set_xlabel('m')
    ax.set_ylabel('success_rate')
    ax.set_title('s = ' + panel)
    ax.legend()
fig.tight_layout()
fig.savefig('results/success_rate_oracle.summary.csv'.replace('.summary.csv', '.png'))

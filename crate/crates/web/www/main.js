import init, { heatmapKeys, heatmap, brunnianSlope, hosokawa } from "./pkg/linksig_web.js";

const $ = (id) => document.getElementById(id);

function show(out, f) {
  try {
    out.textContent = f();
  } catch (e) {
    out.textContent = "error: " + (e.message ?? e);
  }
}

function draw() {
  show($("hm-out"), () => {
    const h = heatmap($("hm-key").value, Number($("hm-n").value));
    const canvas = $("hm-canvas");
    canvas.width = canvas.height = h.side;
    const img = new ImageData(new Uint8ClampedArray(h.rgba), h.side, h.side);
    canvas.getContext("2d").putImageData(img, 0, 0);
    return h.summary;
  });
}

await init();
for (const k of heatmapKeys()) {
  $("hm-key").add(new Option(k, k, k === "t24", k === "t24"));
}
$("hm-go").onclick = draw;
$("sl-go").onclick = () =>
  show($("sl-out"), () => brunnianSlope(Number($("sl-n").value), $("sl-q1").value, $("sl-q2").value));
$("ho-go").onclick = () =>
  show($("ho-out"), () => hosokawa($("ho-delta").value, BigInt($("ho-lk").value)));
draw();

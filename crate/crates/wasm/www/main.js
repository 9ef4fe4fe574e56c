import init, { preprocess, silhouette, compare } from "./pkg/fitbench_wasm.js";

const FAMILIES = { top: ["slim", "regular", "loose"], bottom: ["tapered", "straight"] };
const SIL_H = 192;
const SIL_W = 144;
const SCALE = 2;

const SAMPLE = {
  image_width: 200,
  image_height: 420,
  joints: {
    left_shoulder: [130, 100, 1], right_shoulder: [70, 100, 1],
    left_elbow: [160, 160, 1], right_elbow: [40, 160, 1],
    left_wrist: [175, 215, 1], right_wrist: [25, 215, 1],
    left_hip: [120, 225, 1], right_hip: [80, 225, 1],
    left_knee: [125, 320, 1], right_knee: [75, 320, 1],
    left_ankle: [128, 405, 1], right_ankle: [72, 405, 1],
  },
};

const $ = (id) => document.getElementById(id);

function paint(canvas, rgba, width, height, scale) {
  canvas.width = width;
  canvas.height = height;
  canvas.style.width = `${width * scale}px`;
  canvas.style.height = `${height * scale}px`;
  const image = new ImageData(new Uint8ClampedArray(rgba), width, height);
  canvas.getContext("2d").putImageData(image, 0, 0);
}

function runPreprocess() {
  const text = $("skeleton").value;
  $("preprocess-error").textContent = "";
  try {
    const { image_width, image_height } = JSON.parse(text);
    const rgba = preprocess(text, $("region").value);
    paint($("preprocess-canvas"), rgba, image_width, image_height, 1);
  } catch (err) {
    $("preprocess-error").textContent = String(err.message ?? err);
  }
}

function runSilhouettes() {
  const seed = Number($("seed").value) >>> 0;
  const row = $("silhouettes");
  row.replaceChildren();
  for (const fit of FAMILIES[$("family").value]) {
    const figure = document.createElement("figure");
    const canvas = document.createElement("canvas");
    const caption = document.createElement("figcaption");
    caption.textContent = fit;
    paint(canvas, silhouette(fit, seed, SIL_H, SIL_W), SIL_W, SIL_H, SCALE);
    figure.append(canvas, caption);
    row.append(figure);
  }
}

function runCompare() {
  try {
    const out = JSON.parse(compare(
      $("fit-a").value, Number($("seed-a").value) >>> 0,
      $("fit-b").value, Number($("seed-b").value) >>> 0,
      SIL_H, SIL_W,
    ));
    const phi = (v) => v.map((x) => x.toExponential(3)).join("  ");
    $("compare-out").textContent =
      `Hu distance        ${out.hu.toFixed(4)}\n` +
      `Hausdorff distance ${out.hd.toFixed(4)} px\n` +
      `phi A  ${phi(out.phi_a)}\nphi B  ${phi(out.phi_b)}`;
  } catch (err) {
    $("compare-out").textContent = String(err.message ?? err);
  }
}

function fillFitSelect(select, chosen) {
  for (const fit of [...FAMILIES.top, ...FAMILIES.bottom]) {
    select.append(new Option(fit, fit, false, fit === chosen));
  }
}

await init();
$("skeleton").value = JSON.stringify(SAMPLE, null, 1);
fillFitSelect($("fit-a"), "slim");
fillFitSelect($("fit-b"), "loose");
$("run-preprocess").addEventListener("click", runPreprocess);
$("region").addEventListener("change", runPreprocess);
$("seed").addEventListener("input", runSilhouettes);
$("family").addEventListener("change", runSilhouettes);
$("run-compare").addEventListener("click", runCompare);
runPreprocess();
runSilhouettes();
runCompare();

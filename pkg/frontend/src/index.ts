export { loadTable, parseCsv, SchemaError, Row } from "./csv";
export { buildScene, buildFig2a, buildFig3, buildOffsetFit, BuiltScene } from "./plots";
export { sceneToSvg } from "./svg";
export { sceneToRaster, Raster } from "./raster";
export { rasterToPng } from "./png";
export { quadFit } from "./quadfit";
export { SCHEMAS, PLOTTABLE, expectedColumns } from "./schema";
export { Scene, Primitive, linearScale, ticks, formatTick } from "./scene";
